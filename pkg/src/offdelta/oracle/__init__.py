from offdelta.oracle.contact import contact_reference
from offdelta.oracle.grid import (
    CertifiedResult,
    DeltaModel,
    GridSpec,
    OracleResult,
    certified_error,
    grid_eigensolve,
)
