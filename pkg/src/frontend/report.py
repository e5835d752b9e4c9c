"""报告序列化：JSON 信封 {version, command, config, result, notes} 与 CSV 表格"""
import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.common import config

PLOT_HEADER = ("alpha", "F_alpha", "min_alpha_F")


def _clean(obj: Any) -> Any:
    """JSON 不接受 inf/nan：非有限浮点数写成字符串；numpy 标量与 Enum 转为原生值"""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else repr(value)
    return obj


def envelope(command: str, run_config: Dict[str, Any], result: Any, notes: str = "") -> Dict[str, Any]:
    return {
        "version": config.VERSION,
        "command": command,
        "config": run_config,
        "result": result,
        "notes": notes,
    }


def to_json(doc: Dict[str, Any]) -> str:
    return json.dumps(_clean(doc), ensure_ascii=False, indent=2, allow_nan=False)


# ---------- CSV ----------
def _cell(value: Any) -> str:
    value = _clean(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False, allow_nan=False)
    return str(value)


def table_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def record_csv(record: Dict[str, Any], columns: Optional[List[str]] = None) -> str:
    """单条记录写成两行 CSV（表头 + 数值）"""
    columns = columns or list(record.keys())
    return table_csv(columns, [[record.get(c) for c in columns]])


def plot_csv(alphas: np.ndarray, F: np.ndarray) -> str:
    """alpha,F_alpha,min_alpha_F，按 alpha 严格递增"""
    rows = ((float(a), float(v), float(min(a, v))) for a, v in zip(alphas, F))
    return table_csv(PLOT_HEADER, rows)


def write_text(text: str, out: Optional[str]):
    if out is None:
        return
    Path(out).write_text(text, encoding="utf-8")
