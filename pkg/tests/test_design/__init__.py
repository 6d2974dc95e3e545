# tests/test_design/__init__.py
