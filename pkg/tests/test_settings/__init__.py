# tests/test_settings/__init__.py
