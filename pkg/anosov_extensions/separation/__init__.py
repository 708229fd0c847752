from .certificate import Method, SeparationCertificate, VerificationError, Verdict
from .decide import decide, separating_functional
from .orthant import OrthantCover, opposing_points, orthant_coverage
from .rational import rank_and_kernel, rationalize, rationalize_points
from .simplex import LPResult, LPStatus, maximize
