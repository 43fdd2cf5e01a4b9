"""
Таблицы и Excel-отчеты по проверкам
"""
import json
import logging
from typing import List, Sequence, Union

import openpyxl
import pandas as pd
from openpyxl.styles import Font, PatternFill

from models import CheckReport, PushforwardReport

logger = logging.getLogger(__name__)

Report = Union[CheckReport, PushforwardReport]


def checks_frame(reports: Sequence[CheckReport]) -> pd.DataFrame:
    """По строке на свидетеля: имя проверки, итог, признак расхождения, детали"""
    rows = []
    for r in reports:
        for k, w in enumerate(r.witnesses or [{}]):
            details = {key: value for key, value in w.items() if key != "mismatch"}
            rows.append({
                "check": r.name,
                "passed": r.passed,
                "witness": k,
                "mismatch": bool(w.get("mismatch")),
                "details": json.dumps(details, ensure_ascii=False),
            })
    return pd.DataFrame(rows, columns=["check", "passed", "witness", "mismatch", "details"])


def pushforward_frame(reports: Sequence[PushforwardReport]) -> pd.DataFrame:
    rows = []
    for i, r in enumerate(reports):
        data = r.model_dump(mode="json", exclude={"preimages"})
        rows.append({
            "sample_index": i,
            "sample": ", ".join(data["sample"]),
            "degree": r.degree_found,
            "lhs": r.lhs,
            "lhs_imag": r.lhs_imag,
            "rhs": r.rhs,
            "abs_err": r.abs_err,
            "rel_err": r.rel_err,
            "sign": r.sign,
            "resamples": r.resamples,
            "passed": r.passed,
        })
    return pd.DataFrame(rows)


def _write_sheet(ws, title: str, frame: pd.DataFrame):
    ws['A1'] = title
    ws['A1'].font = Font(size=14, bold=True)
    if len(frame.columns) > 1:
        ws.merge_cells(start_row=1, start_column=1, end_row=1, end_column=len(frame.columns))

    for col, header in enumerate(frame.columns, 1):
        cell = ws.cell(row=3, column=col, value=str(header))
        cell.font = Font(bold=True)
        cell.fill = PatternFill(start_color="CCCCCC", end_color="CCCCCC", fill_type="solid")

    for idx, record in enumerate(frame.itertuples(index=False), 1):
        for col, value in enumerate(record, 1):
            ws.cell(row=3 + idx, column=col, value=value.item() if hasattr(value, "item") else value)


def export_reports(path: str, reports: Sequence[Report]):
    """
    Сохранить отчеты в .xlsx: лист на вид отчета

    Args:
        path: путь к файлу
        reports: CheckReport и/или PushforwardReport
    """
    checks: List[CheckReport] = [r for r in reports if isinstance(r, CheckReport)]
    pushes: List[PushforwardReport] = [r for r in reports if isinstance(r, PushforwardReport)]

    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = "Проверки"
    _write_sheet(ws, "Канонические формы: проверки", checks_frame(checks))
    if pushes:
        _write_sheet(wb.create_sheet("Прямой образ"), "Прямой образ: по точкам", pushforward_frame(pushes))

    wb.save(path)
    logger.info(f"✅ Отчет сохранен: {path} ({len(checks)} проверок, {len(pushes)} точек)")


def export_table(path: str, frame: pd.DataFrame):
    """Сохранить сводную таблицу свойств (по строке на многогранник) в .xlsx"""
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = "Свойства"
    _write_sheet(ws, "Канонические формы: свойства по многогранникам", frame)
    wb.save(path)
    logger.info(f"✅ Таблица сохранена: {path} ({len(frame)} многогранников)")
