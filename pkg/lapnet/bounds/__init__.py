# lapnet/bounds/__init__.py
