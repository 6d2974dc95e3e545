# tests/test_model/__init__.py
