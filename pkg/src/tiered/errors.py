class ConfigError(ValueError):
    """Invalid tier configuration or node coordinate."""


class CapacityError(Exception):
    """The fixed capacity of the structure would be exceeded."""


class StructureError(RuntimeError):
    """Internal structure is inconsistent (a bug, or a corrupted instance)."""


class ContractError(RuntimeError):
    """A storage operation was called outside its precondition."""
