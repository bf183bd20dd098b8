from .model_block import (BlockDomainError, BlockPoint, QuotientBlock, ShearProfile, circle_distance,
                          exit_map, exit_shear, exit_shear_derivative, inverse_exit_map, quotient_block,
                          shear_derivative_symbolic, transit_time, vector_field)
from .integrator import (SymmetryReport, Trajectory, TransitBatch, check_symmetries, integrate_orbit,
                         sample_block_points, transit_batch)

__all__ = ['BlockDomainError', 'BlockPoint', 'QuotientBlock', 'ShearProfile', 'circle_distance',
           'exit_map', 'exit_shear', 'exit_shear_derivative', 'inverse_exit_map', 'quotient_block',
           'shear_derivative_symbolic', 'transit_time', 'vector_field', 'SymmetryReport', 'Trajectory',
           'TransitBatch', 'check_symmetries', 'integrate_orbit', 'sample_block_points', 'transit_batch']
