"""
Utility functions for the application
"""
import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

from pydantic import ValidationError

from app.frames.errors import InvalidWindowError
from app.frames.window import Window, make_bspline
from app.schemas import WindowFile

PathLike = Union[str, Path]


def load_window(path: PathLike) -> Window:
    """Read a window from its JSON file format.

    Args:
        path: Path to a JSON document {"alpha": ..., "pieces": [...]}

    Returns:
        The validated Window

    Raises:
        OSError: If the file cannot be read
        InvalidWindowError: If the document is malformed or violates the window invariants
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = WindowFile.model_validate_json(text)
    except ValidationError as e:
        raise InvalidWindowError(f"Malformed window file {path}: {e.error_count()} error(s); {e.errors()[0]['msg']}")
    return Window.from_dict(document.to_window_dict())


def dump_window(w: Window, path: Optional[PathLike] = None) -> str:
    """Serialize a window with exact rational strings; writes it when path is given.

    Args:
        w: Window to serialize
        path: Optional output path

    Returns:
        The JSON text
    """
    text = dumps_report(w.to_dict())
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def resolve_window(window: Optional[Dict[str, Any]] = None, bspline: Optional[int] = None) -> Window:
    """Window from an inline document or a B-spline order; exactly one is expected."""
    if (window is None) == (bspline is None):
        raise ValueError("Exactly one of a window document or a B-spline order is required")
    if bspline is not None:
        return make_bspline(bspline)
    return Window.from_dict(window)


def dumps_report(report: Dict[str, Any]) -> str:
    """Deterministic JSON text for reports (insertion order, fixed indentation)."""
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def format_float(x: float) -> str:
    return repr(float(x))


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write rows with a header line; floats use the shortest round-trip form."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return path
