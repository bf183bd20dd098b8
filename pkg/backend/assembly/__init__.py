from .manifold import (AssembledManifold, AssemblyError, BlockRecord, ChartPoint, ChartSide, Seam,
                       SurfaceClass, TangentCircle, TransverseComponent, VerticalOrbit, assemble,
                       chart_to_global, global_to_chart, seam_flip_composition)

__all__ = ['AssembledManifold', 'AssemblyError', 'BlockRecord', 'ChartPoint', 'ChartSide', 'Seam',
           'SurfaceClass', 'TangentCircle', 'TransverseComponent', 'VerticalOrbit', 'assemble',
           'chart_to_global', 'global_to_chart', 'seam_flip_composition']
