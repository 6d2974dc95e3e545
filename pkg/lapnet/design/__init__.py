# lapnet/design/__init__.py
