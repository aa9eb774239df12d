"""
FastAPI front end for the MoritaKit commands.

Every computation runs through the same ReportService as the CLI, so a
POST body yields the report ``moritakit <command> --json`` would print.
"""
import time
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from src.api.dependencies import cleanup_services, get_report_service
from src.api.routes import router
from src.config.settings import settings
from src.core.exactla import Field
from src.core.exceptions import MoritaKitError
from src.services.report_service import COMMANDS
from src.utils.logger import get_logger, log_error, setup_logging
from src.utils.performance import performance_monitor


def _default_field_label() -> str:
    f = Field.prime(settings.field_prime) if settings.field_kind == "prime" else Field.rational()
    return f.label


@asynccontextmanager
async def lifespan(app: FastAPI):
    setup_logging()
    logger = get_logger("startup")
    get_report_service()
    logger.info(
        "MoritaKit API ready",
        version=settings.app_version,
        default_field=_default_field_label(),
        default_cutoff=settings.default_cutoff,
    )
    yield
    logger.info("MoritaKit API stopping", timings=performance_monitor.summary_lines())
    await cleanup_services()


app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Exact computations over Morita rings of finite-dimensional algebras",
    debug=settings.debug,
    lifespan=lifespan,
)

# Read-only computations; any origin may call them in debug mode.
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"] if settings.debug else [],
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)

app.include_router(router, prefix="/api/v1")


@app.middleware("http")
async def time_requests(request: Request, call_next):
    """Time each request and report the duration in X-Process-Time."""
    start = time.time()
    response = await call_next(request)
    elapsed = time.time() - start
    performance_monitor.record_operation(f"http:{request.method} {request.url.path}", elapsed)
    get_logger("http").info(
        "Request served",
        method=request.method,
        path=request.url.path,
        status_code=response.status_code,
        seconds=round(elapsed, 4),
    )
    response.headers["X-Process-Time"] = f"{elapsed:.6f}"
    return response


@app.get("/")
async def root():
    return {
        "message": "MoritaKit API",
        "version": settings.app_version,
        "status": "running",
        "commands": len(COMMANDS),
    }


@app.get("/health")
async def health_check():
    return {
        "status": "healthy",
        "timestamp": time.time(),
        "version": settings.app_version,
        "default_field": _default_field_label(),
        "default_cutoff": settings.default_cutoff,
    }


@app.exception_handler(MoritaKitError)
async def moritakit_exception_handler(request: Request, exc: MoritaKitError):
    """The request carried an unusable document or field: 400 with the error payload."""
    get_logger("error").warning("Rejected request", error=exc.to_dict(), path=request.url.path)
    return JSONResponse(status_code=400, content=exc.to_dict())


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    log_error(exc, {"path": request.url.path, "method": request.method})
    return JSONResponse(
        status_code=500,
        content={
            "error": "InternalError",
            "message": str(exc) if settings.debug else "computation failed",
        },
    )


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "src.api.main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.debug,
        log_level=settings.log_level.lower(),
    )
