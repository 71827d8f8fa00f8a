APP_NAME = "dirberg"
