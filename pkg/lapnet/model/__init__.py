# lapnet/model/__init__.py
