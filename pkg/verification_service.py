"""
Сервис проверок канонических форм
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from adjoint import adjoint_interpolation_probe, adjoint_vanishing_check
from canonical_form import CanonicalForm
from checks import filliman_check, positive_convexity_check, subdivision_verify
from config import Config
from errors import InputFormatError
from form_engines import canonical_form
from models import CheckReport, PushforwardReport, PushforwardRequest
from polytope import Polytope
from pushforward import pushforward_check, summarize_pushforward
from residues import recursion_verify

logger = logging.getLogger(__name__)


class VerificationService:
    """Оркестрация методов и проверок, параллельно по независимым многогранникам"""

    def __init__(self, threads: int = Config.THREADS, seed: int = Config.SEED):
        """
        Инициализация сервиса

        Args:
            threads: число рабочих потоков
            seed: зерно всех псевдослучайных выборок
        """
        self.threads = max(1, threads)
        self.seed = seed

    def _map(self, func: Callable, items: Sequence) -> List:
        """Параллельный map с сохранением порядка"""
        if self.threads == 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(func, items))

    def canonical_form(self, p: Polytope, method: str = "triangulation") -> Tuple[CanonicalForm, Optional[CheckReport]]:
        """
        Ω(P) выбранным методом; для method="all" - все три с проверкой совпадения

        Returns:
            Кортеж (форма, отчет о совпадении методов или None)
        """
        if method != "all":
            form = canonical_form(p, method)
            logger.info(f"Ω(P) методом {method}: {form.pretty()}")
            return form, None
        report = filliman_check(p)
        form = canonical_form(p, "triangulation")
        logger.info(f"Ω(P) тремя методами: {'совпадают' if report.passed else 'РАСХОДЯТСЯ'}")
        return form, report

    def check(self, name: str, p: Polytope, samples: int = Config.CONVEXITY_SAMPLES) -> List[CheckReport]:
        """Одна именованная проверка многогранника"""
        if name == "recursion":
            return [recursion_verify(p)]
        if name == "filliman":
            return [filliman_check(p)]
        if name == "convexity":
            return [positive_convexity_check(p, samples, self.seed)]
        if name == "residual":
            return [adjoint_vanishing_check(p), adjoint_interpolation_probe(p)]
        raise InputFormatError(f"Неизвестная проверка {name!r}")

    def check_many(self, name: str, polytopes: Sequence[Polytope], samples: int = Config.CONVEXITY_SAMPLES) -> List[CheckReport]:
        """Проверка набора многогранников; отчеты в порядке входа"""
        logger.info(f"Проверка {name} для {len(polytopes)} многогранников в {self.threads} потоках")
        nested = self._map(lambda p: self.check(name, p, samples), list(polytopes))
        reports = [r for group in nested for r in group]
        failed = sum(not r.passed for r in reports)
        if failed:
            logger.warning(f"⚠️ Проверка {name}: {failed} из {len(reports)} не пройдены")
        return reports

    def subdivision(self, parent: Polytope, parts: Sequence[Polytope]) -> CheckReport:
        return subdivision_verify(parent, parts)

    def pushforward(self, request: PushforwardRequest, target: Optional[Polytope] = None) -> Tuple[List[PushforwardReport], CheckReport]:
        """Проверка прямого образа с итоговой сводкой"""
        reports = pushforward_check(
            request.W, request.V, target,
            nsamples=request.samples, tol=request.tol, seed=self.seed, threads=self.threads,
        )
        return reports, summarize_pushforward(reports, request.V)

    def property_table(self, polytopes: Sequence[Polytope], samples: int = Config.CONVEXITY_SAMPLES) -> pd.DataFrame:
        """Сводная таблица: по строке на многогранник, по столбцу на проверку"""
        def row(p: Polytope) -> Dict:
            reports = (
                self.check("filliman", p) + self.check("recursion", p) + self.check("convexity", p, samples)
            )
            result = {"dim": p.dim, "vertices": len(p.vertices), "facets": len(p.facets)}
            result.update({r.name: r.passed for r in reports})
            return result

        return pd.DataFrame(self._map(row, list(polytopes)))
