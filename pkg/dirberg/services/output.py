import json
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from dirberg.services import constants


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, f".{constants.FLOAT_DIGITS}g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def plain(value):
    """Convert numpy scalars/arrays, complex numbers and Fractions into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def to_json_text(value, indent: int = None) -> str:
    """JSON text with every float written with 17 significant digits."""
    return _encode(plain(value), indent, 0)


def _encode(value, indent, level) -> str:
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, dict):
        items = [f"{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return _wrap("{", "}", items, indent, level)
    if isinstance(value, list):
        return _wrap("[", "]", [_encode(v, indent, level + 1) for v in value], indent, level)
    return json.dumps(value)


def _wrap(open_, close, items, indent, level) -> str:
    if not items:
        return open_ + close
    if indent is None:
        return open_ + ", ".join(items) + close
    pad = " " * (indent * (level + 1))
    return open_ + "\n" + ",\n".join(pad + item for item in items) + "\n" + " " * (indent * level) + close


def atomic_write(path: str, text: str) -> None:
    """Write text to path via a temporary file in the same directory and os.replace."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    fd, temporary = tempfile.mkstemp(prefix=f".{target.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(temporary, target)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise
