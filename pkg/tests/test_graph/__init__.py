# tests/test_graph/__init__.py
