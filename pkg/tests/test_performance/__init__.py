# tests/test_performance/__init__.py
