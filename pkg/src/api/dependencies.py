"""API依赖注入"""

import logging
from typing import Annotated, Optional
from fastapi import Depends

from src.services import DocumentService, ReportService

logger = logging.getLogger(__name__)

# 全局服务实例
_report_service: Optional[ReportService] = None


def get_report_service() -> ReportService:
    """获取报告服务实例"""
    global _report_service
    if _report_service is None:
        _report_service = ReportService(DocumentService())
    return _report_service


# 依赖注入类型注解
ReportServiceDep = Annotated[ReportService, Depends(get_report_service)]


async def cleanup_services() -> None:
    """清理服务资源"""
    global _report_service
    logger.info("清理服务资源")
    _report_service = None
