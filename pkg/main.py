"""
canform - точные канонические формы выпуклых многогранников
============================================================

Команды:
- canon: Ω(P) одним из трех методов или всеми сразу
- residue, adjoint, residual, polar, dualvol, laplace, mixedvol
- check-recursion, check-subdivision, check-filliman, check-convexity, check-pushforward
- check-batch: проверки набора многогранников в --threads потоках

Коды выхода: 0 - успех, 1 - проверка не пройдена, 2 - ошибка входных данных.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence, Union

from pydantic import BaseModel, ValidationError

from adjoint import adjoint, adjoint_interpolation_probe, adjoint_vanishing_check, residual_arrangement
from canonical_form import CanonicalForm
from config import Config
from errors import CanformError, InputFormatError
from exact_core import format_rat, parse_rat
from form_engines import canon_dual_cone, dual_mixed_volume, dual_volume_terms, laplace_terms
from models import CanonicalFormModel, CheckReport, PolytopeSpec, PushforwardReport, PushforwardRequest
from polytope import Polytope, polar_at
from report_export import checks_frame, export_reports, export_table, pushforward_frame
from residues import residue
from verification_service import VerificationService

logger = logging.getLogger(__name__)

VERBS = (
    "canon", "residue", "adjoint", "residual", "polar", "dualvol", "laplace", "mixedvol",
    "check-recursion", "check-subdivision", "check-filliman", "check-convexity", "check-pushforward",
    "check-batch",
)


def _read_json(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def parse_spec(path: str) -> PolytopeSpec:
    return PolytopeSpec.model_validate_json(_read_json(path))


def parse_polytope(path: str) -> Polytope:
    """
    Прочитать многогранник из JSON

    Args:
        path: файл с V-представлением {"dim", "vertices"} или H-представлением {"dim", "facets"}

    Returns:
        Проверенный Polytope (H-представление переводится в V перечислением вершин)
    """
    spec = parse_spec(path)
    if spec.points is not None:
        raise InputFormatError(f"{path}: поле points допустимо только для слагаемых mixedvol")
    return spec.to_polytope()


def _parse_summand(path: str) -> Union[Polytope, List[List]]:
    spec = parse_spec(path)
    if spec.points is not None:
        return spec.points
    return spec.to_polytope()


def _parse_point(text: str) -> List:
    try:
        return [parse_rat(x) for x in text.split(",")]
    except CanformError as e:
        raise InputFormatError(f"--point: {e}") from e


def _dump(model: Union[BaseModel, Sequence[BaseModel], dict]) -> str:
    if isinstance(model, BaseModel):
        data = model.model_dump(mode="json", exclude_none=True)
    elif isinstance(model, dict):
        data = model
    else:
        data = [m.model_dump(mode="json", exclude_none=True) for m in model]
    return json.dumps(data, indent=2, ensure_ascii=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="canform", description="Точные канонические формы выпуклых многогранников")
    parser.add_argument("verb", choices=VERBS, help="Команда")
    parser.add_argument("--input", help="JSON многогранника (или запроса для check-pushforward)")
    parser.add_argument("--method", choices=["triangulation", "dualvol", "laplace", "all"], default="triangulation")
    parser.add_argument("--facet", type=int, default=0, help="Номер грани для residue")
    parser.add_argument("--samples", type=int, default=None, help="Число точек выборки")
    parser.add_argument("--tol", type=float, default=None, help="Допуск для check-pushforward")
    parser.add_argument("--format", choices=["pretty", "json"], default="pretty")
    parser.add_argument("--threads", type=int, default=Config.THREADS)
    parser.add_argument("--seed", type=int, default=Config.SEED)
    parser.add_argument("--parent", help="Родительский многогранник для check-subdivision")
    parser.add_argument("--parts", nargs="+", default=[], help="Части разбиения для check-subdivision")
    parser.add_argument("--summands", nargs="+", default=[], help="Слагаемые для mixedvol")
    parser.add_argument("--inputs", nargs="+", default=[], help="Многогранники для check-batch")
    parser.add_argument(
        "--check", choices=["all", "filliman", "recursion", "convexity", "residual"], default="all",
        help="Проверка для check-batch (all - сводная таблица)",
    )
    parser.add_argument("--point", help="Внутренняя точка для polar, через запятую (по умолчанию центр)")
    parser.add_argument("--xlsx", help="Сохранить отчеты проверок в Excel")
    return parser


def _require(value, flag: str, verb: str):
    if not value:
        raise InputFormatError(f"Команда {verb} требует {flag}")
    return value


def _emit_reports(args, reports: List[CheckReport], out) -> int:
    if args.xlsx:
        export_reports(args.xlsx, reports)
    if args.format == "json":
        print(_dump(reports), file=out)
    else:
        frame = checks_frame(reports)
        print(frame.to_string(index=False), file=out)
        for r in reports:
            print(f"{r.name}: {'passed' if r.passed else 'FAILED'}", file=out)
    return 0 if all(r.passed for r in reports) else 1


def _form_output(args, form: CanonicalForm, out):
    if args.format == "json":
        print(_dump(CanonicalFormModel.from_form(form)), file=out)
    else:
        print(form.pretty(), file=out)
        if form.chart is not None:
            print(f"chart: {form.chart.pretty()}", file=out)


def run(args: argparse.Namespace, out=None) -> int:
    """
    Выполнить команду

    Returns:
        Код выхода: 0 - успех, 1 - проверка не пройдена, 2 - ошибка входных данных
    """
    out = out or sys.stdout
    service = VerificationService(threads=args.threads, seed=args.seed)
    verb = args.verb
    try:
        if verb == "check-subdivision":
            parent = parse_polytope(_require(args.parent, "--parent", verb))
            parts = [parse_polytope(path) for path in _require(args.parts, "--parts", verb)]
            return _emit_reports(args, [service.subdivision(parent, parts)], out)

        if verb == "mixedvol":
            summands = [_parse_summand(path) for path in _require(args.summands, "--summands", verb)]
            _form_output(args, dual_mixed_volume(summands), out)
            return 0

        if verb == "check-pushforward":
            request = PushforwardRequest.model_validate_json(_read_json(_require(args.input, "--input", verb)))
            if args.samples is not None:
                request.samples = args.samples
            if args.tol is not None:
                request.tol = args.tol
            reports, summary = service.pushforward(request)
            if args.xlsx:
                export_reports(args.xlsx, [summary, *reports])
            if args.format == "json":
                print(_dump(reports), file=out)
            else:
                print(pushforward_frame(reports).to_string(index=False), file=out)
                print(f"{summary.name}: {'passed' if summary.passed else 'FAILED'}", file=out)
            return 0 if summary.passed and all(r.passed for r in reports) else 1

        if verb == "check-batch":
            paths = _require(args.inputs, "--inputs", verb)
            polytopes = [parse_polytope(path) for path in paths]
            samples = args.samples if args.samples is not None else Config.CONVEXITY_SAMPLES
            if args.check != "all":
                return _emit_reports(args, service.check_many(args.check, polytopes, samples), out)
            table = service.property_table(polytopes, samples)
            table.insert(0, "input", list(paths))
            if args.xlsx:
                export_table(args.xlsx, table)
            if args.format == "json":
                print(table.to_json(orient="records", force_ascii=False, indent=2), file=out)
            else:
                print(table.to_string(index=False), file=out)
            checks = ["filliman", "recursion", "convexity"]
            return 0 if table[checks].all().all() else 1

        p = parse_polytope(_require(args.input, "--input", verb))

        if verb == "canon":
            form, report = service.canonical_form(p, args.method)
            _form_output(args, form, out)
            if report is not None:
                if args.format == "pretty":
                    note = "три метода совпадают" if report.passed else "методы РАСХОДЯТСЯ"
                    print(f"# {note}: triangulation = dualvol = laplace", file=out)
                return 0 if report.passed else 1
            return 0

        if verb == "residue":
            if not 0 <= args.facet < len(p.facets):
                raise InputFormatError(f"--facet {args.facet}: у многогранника {len(p.facets)} граней")
            form, _ = service.canonical_form(p, "triangulation" if args.method == "all" else args.method)
            _form_output(args, residue(form, p.facets[args.facet], p), out)
            return 0

        if verb == "adjoint":
            a = adjoint(p)
            names = [f"X{i}" for i in range(p.dim + 1)]
            if args.format == "json":
                print(_dump({
                    "vars": names,
                    "degree": a.degree(),
                    "terms": [{"coeff": format_rat(c), "exp": list(e)} for e, c in a.terms()],
                }), file=out)
            else:
                print(a.pretty(names), file=out)
            return 0

        if verb == "residual":
            arrangement = residual_arrangement(p)
            reports = [adjoint_vanishing_check(p), adjoint_interpolation_probe(p)]
            if args.format == "pretty":
                for flat in arrangement.flats:
                    print(f"flat {flat.describe()}", file=out)
            return _emit_reports(args, reports, out)

        if verb == "polar":
            point = _parse_point(args.point) if args.point else list(p.centroid)
            print(_dump(PolytopeSpec.from_polytope(polar_at(p, point))), file=out)
            return 0

        if verb == "dualvol":
            terms = dual_volume_terms(p)
            form, _ = service.canonical_form(p, "dualvol")
            if args.format == "json":
                print(_dump({
                    "terms": [CanonicalFormModel.from_form(t).model_dump(mode="json", exclude_none=True) for t in terms],
                    "sum": CanonicalFormModel.from_form(form).model_dump(mode="json", exclude_none=True),
                }), file=out)
            else:
                for t in terms:
                    print(f"+ {t.pretty()}", file=out)
                print(f"= {form.pretty()}", file=out)
            return 0

        if verb == "laplace":
            terms = laplace_terms(p)
            form = canon_dual_cone(p)
            if args.format == "json":
                print(_dump({
                    "terms": [t.pretty() for t in terms],
                    "sum": CanonicalFormModel.from_form(form).model_dump(mode="json", exclude_none=True),
                }), file=out)
            else:
                for t in terms:
                    print(f"+ {t.pretty()}", file=out)
                print(f"= {form.pretty()}", file=out)
            return 0

        check = {
            "check-recursion": "recursion",
            "check-filliman": "filliman",
            "check-convexity": "convexity",
        }[verb]
        samples = args.samples if args.samples is not None else Config.CONVEXITY_SAMPLES
        return _emit_reports(args, service.check(check, p, samples), out)

    except (CanformError, ValidationError, json.JSONDecodeError, OSError) as e:
        logger.error(f"❌ {verb}: {e}")
        print(f"canform: ошибка: {e}", file=sys.stderr)
        return 2


def cli(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    # Настройка логирования
    logging.basicConfig(
        level=Config.LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    return run(args)


if __name__ == "__main__":
    sys.exit(cli())
