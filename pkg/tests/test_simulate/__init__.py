# tests/test_simulate/__init__.py
