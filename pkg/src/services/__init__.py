"""服务层模块"""

from .document_service import DocumentService, LoadedDocument
from .subcat_service import SubcategoryService
from .homdim_service import HomologicalDimensionService
from .gorenstein_service import GorensteinService
from .report_service import ReportService, RunFlags

__all__ = [
    'DocumentService',
    'LoadedDocument',
    'SubcategoryService',
    'HomologicalDimensionService',
    'GorensteinService',
    'ReportService',
    'RunFlags'
]
