from fastapi import FastAPI, HTTPException, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
import logging
import traceback

from app.config import configure_logging
from app.schemas import (
    AtlasRequest,
    AtlasResponse,
    CheckRequest,
    CheckResponse,
    CurvesRequest,
    CurvesResponse,
    DualRequest,
    DualResponse,
    HealthResponse,
    ResidualResponse,
    VerifyRequest,
    ZZBoundRequest,
    ZZBoundResponse,
    WindowSource,
)
from app.utils import resolve_window
from app.workflows import run_atlas, run_check, run_curves, run_dual, run_verify, run_zzbound

logger = logging.getLogger(__name__)

app = FastAPI(title="Gabor Frame Service", version="1.0.0")

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # In production, replace with specific origins
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    """Handle validation errors and return clear messages"""
    errors = exc.errors()
    error_messages = []

    for error in errors:
        field = ".".join(str(loc) for loc in error.get("loc", []) if loc != "body")
        error_type = error.get("type")
        msg = error.get("msg")

        if error_type == "missing":
            error_messages.append(f"Field '{field}' is required")
        elif field:
            error_messages.append(f"{field}: {msg}")
        else:
            error_messages.append(msg)

    detail = ". ".join(error_messages) if error_messages else "Validation error in the submitted data"
    return JSONResponse(
        status_code=400,
        content={"detail": detail}
    )


@app.on_event("startup")
async def startup_event():
    configure_logging()
    logger.info("Gabor frame service ready")


def _window_of(request: WindowSource):
    document = request.window.to_window_dict() if request.window is not None else None
    return resolve_window(document, request.bspline)


def _as_http_error(endpoint: str, e: Exception) -> HTTPException:
    """ValueError (bad windows, parameters, preconditions) maps to 400, the rest to 500."""
    if isinstance(e, HTTPException):
        return e
    if isinstance(e, ValueError):
        logger.info(f"{endpoint}: rejected request: {e}")
        return HTTPException(status_code=400, detail=f"Invalid request: {str(e)}")
    logger.error(f"Exception in {endpoint}: {e}")
    logger.debug(traceback.format_exc())
    return HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@app.get("/health", response_model=HealthResponse)
async def health():
    return JSONResponse(content=HealthResponse().model_dump(by_alias=True))


@app.post("/check", response_model=CheckResponse)
async def check(request: CheckRequest):
    """Frame decision for (g, a, b); OutOfScope is a regular 200 response."""
    try:
        w = _window_of(request)
        report = await run_in_threadpool(run_check, w, request.a, request.b, request.bspline)
        result = CheckResponse.model_validate(report)
        return JSONResponse(content=result.model_dump(by_alias=True))
    except Exception as e:
        raise _as_http_error("/check", e)


@app.post("/dual", response_model=DualResponse)
async def dual(request: DualRequest):
    try:
        w = _window_of(request)
        _, report = await run_in_threadpool(run_dual, w, request.a, request.b, request.grid)
        result = DualResponse.model_validate(report)
        return JSONResponse(content=result.model_dump(by_alias=True, exclude_none=True))
    except Exception as e:
        raise _as_http_error("/dual", e)


@app.post("/verify", response_model=ResidualResponse)
async def verify(request: VerifyRequest):
    try:
        w = _window_of(request)
        report = await run_in_threadpool(run_verify, w, request.a, request.b, request.grid, request.tol)
        result = ResidualResponse.model_validate(report.to_dict())
        return JSONResponse(content=result.model_dump(by_alias=True))
    except Exception as e:
        raise _as_http_error("/verify", e)


@app.post("/curves", response_model=CurvesResponse)
async def curves(request: CurvesRequest):
    try:
        w = _window_of(request)
        _, report = await run_in_threadpool(run_curves, w, request.max_index)
        result = CurvesResponse.model_validate(report)
        return JSONResponse(content=result.model_dump(by_alias=True))
    except Exception as e:
        raise _as_http_error("/curves", e)


@app.post("/atlas", response_model=AtlasResponse)
async def atlas(request: AtlasRequest):
    try:
        _, report = await run_in_threadpool(
            run_atlas,
            request.bspline,
            (request.amin, request.amax),
            (request.bmin, request.bmax),
            request.res,
        )
        result = AtlasResponse.model_validate(report)
        return JSONResponse(content=result.model_dump(by_alias=True))
    except Exception as e:
        raise _as_http_error("/atlas", e)


@app.post("/zzbound", response_model=ZZBoundResponse)
async def zzbound(request: ZZBoundRequest):
    try:
        w = _window_of(request)
        report = await run_in_threadpool(run_zzbound, w, request.a, request.b, request.grid)
        result = ZZBoundResponse.model_validate(report)
        return JSONResponse(content=result.model_dump(by_alias=True))
    except Exception as e:
        raise _as_http_error("/zzbound", e)
