"""精确代数内核：域与矩阵、有限维代数、模与 Morita 上下文"""

from .exactla import Field, Subspace
from .fdalg import FDAlgebra, Presentation, Quiver, Arrow, build_path_algebra
from .fdmod import Bimodule, DimResult, FDModule, ModuleMap, Resolution
from .morita import MoritaContext, TupleMap, TupleModule

__all__ = [
    "Field",
    "Subspace",
    "FDAlgebra",
    "Presentation",
    "Quiver",
    "Arrow",
    "build_path_algebra",
    "Bimodule",
    "DimResult",
    "FDModule",
    "ModuleMap",
    "Resolution",
    "MoritaContext",
    "TupleMap",
    "TupleModule",
]
