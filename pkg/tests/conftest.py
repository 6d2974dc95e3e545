# tests/conftest.py


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo or enumeration runs (deselect with -m 'not slow')")
