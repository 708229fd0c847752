from .functional import LinearFunctional, functional_apply
from .vector import (
    SeqVector,
    as_seqvector,
    product_metric,
    product_metric_batch,
    truncate,
    truncation_tail_bound,
)
