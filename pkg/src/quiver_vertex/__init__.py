"""Vertex functions, descendants and chamber structure for the
zero-dimensional type-A quiver varieties X_lambda."""

from .partitions import Partition, Box, column_profile
from .qseries import SpecializationContext, TruncatedSeries
from .vertex import (vertex_product, vertex_localization, macdonald_apply,
                     descendant_vertex, capped_expression, capped_expand,
                     DescendantPolynomial, gluing, flag_vertex)

__version__ = "0.1.0"
