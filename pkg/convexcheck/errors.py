class NetworkError(ValueError):
    "Raised when a network violates a structural invariant (kinds, edges, biases, dead neurons)."
    pass


class CycleError(NetworkError):
    "Raised when the edge relation of a network is not acyclic."
    pass


class DimensionError(ValueError):
    "Raised when an input point does not match the input dimension of the network."
    pass


class GuardRailError(RuntimeError):
    "Raised when a problem exceeds the sizes the exact procedures are meant for."
    pass


class SolverError(RuntimeError):
    "Raised when the LP engine fails or returns a witness that does not validate."
    pass


class PlacementError(SolverError):
    "Raised when no epsilon places both oracle points strictly inside their regions."
    pass


class ToleranceError(RuntimeError):
    "Raised when adjacent regions disagree outside their switching set."
    pass


class ConvexcheckWarning(UserWarning):
    "Numerical oddities that do not invalidate a result by themselves."
    pass
