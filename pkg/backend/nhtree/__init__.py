from .presentation import (NHTree, PresentationError, TreeAutomorphism, Witness, check_automorphism,
                           edge_key, parse_automorphism, parse_presentation)
from .queries import (AxisPreconditionError, AxisResult, Block, FixSets, axis, block,
                      classical_translation_axis, components_minus_point, distance, fix_sets,
                      nonseparated, prongs)

__all__ = [
    'NHTree', 'PresentationError', 'TreeAutomorphism', 'Witness', 'check_automorphism', 'edge_key',
    'parse_automorphism', 'parse_presentation',
    'AxisPreconditionError', 'AxisResult', 'Block', 'FixSets', 'axis', 'block', 'classical_translation_axis',
    'components_minus_point', 'distance', 'fix_sets', 'nonseparated', 'prongs',
]
