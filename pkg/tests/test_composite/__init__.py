# tests/test_composite/__init__.py
