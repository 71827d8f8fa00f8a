from dirberg.verification.report import FAIL, PASS, VerificationReport, compare, report_table, violation
from dirberg.verification.suites import SUITES, run_suite
