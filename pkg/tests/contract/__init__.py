# Contract tests
