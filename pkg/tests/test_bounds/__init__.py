# tests/test_bounds/__init__.py
