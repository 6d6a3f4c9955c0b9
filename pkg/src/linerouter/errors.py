class RouterError(Exception):
    pass


class ConfigurationError(RouterError, ValueError):
    """Invalid scenario, topology or parameter value."""


class MultiConnectionError(RouterError):
    """More than two ports share one circuit; pairwise attribution is impossible."""


class BusyError(RouterError):
    """A mode command arrived while another one is still pending."""


class WiringError(RouterError):
    """Internal inconsistency between controller and sensing pipeline."""


class CommandError(RouterError, ValueError):
    """A mode command that can never be executed (unknown or already active mode)."""
