"""API路由定义"""

import logging
from typing import Any, Dict, Optional
from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from src.core.exactla import Field as ScalarField
from src.models.document import Document
from src.api.dependencies import ReportServiceDep
from src.services.report_service import COMMANDS, RunFlags
from src.utils.performance import performance_monitor

logger = logging.getLogger(__name__)

# 创建路由器
router = APIRouter()


class RunRequest(BaseModel):
    """与命令行参数对应的运行请求"""

    document: Document
    cutoff: Optional[int] = Field(None, ge=1)
    depth: Optional[int] = Field(None, ge=0)
    window: Optional[int] = Field(None, ge=1)
    theorem: Optional[str] = None
    module: Optional[str] = None
    prime: Optional[int] = Field(None, description="覆盖文档的基域为 GF(p)")


@router.get("/commands")
async def list_commands() -> Dict[str, str]:
    """列出可用命令"""
    return dict(COMMANDS)


@router.post("/run/{command}")
def run_command(command: str, request: RunRequest, report_service: ReportServiceDep) -> Dict[str, Any]:
    """对请求中的文档执行命令，返回与 --json 相同的报告"""
    if command not in COMMANDS or command == "examples":
        raise HTTPException(status_code=404, detail=f"未知的命令: {command}")
    flags = RunFlags(
        cutoff=request.cutoff,
        depth=request.depth,
        window=request.window,
        theorem=request.theorem,
        module=request.module,
    )
    field = ScalarField.prime(request.prime) if request.prime else None
    report = report_service.run_document(command, request.document, flags, field)
    logger.info(f"命令 {command} 完成: {report.status}")
    return report.to_json_dict()


@router.get("/metrics")
async def get_metrics() -> Dict[str, Any]:
    """各计算步骤的耗时统计"""
    return performance_monitor.get_metrics()
