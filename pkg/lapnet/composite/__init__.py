# lapnet/composite/__init__.py
