"""
Конфигурация вычислений канонических форм
"""
import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    # Воспроизводимость
    SEED = int(os.getenv("CANFORM_SEED", "20220701"))
    THREADS = int(os.getenv("CANFORM_THREADS", "1"))

    # Логирование
    LOG_LEVEL = os.getenv("CANFORM_LOG_LEVEL", "WARNING")

    # Проверка положительной выпуклости
    CONVEXITY_SAMPLES = int(os.getenv("CANFORM_CONVEXITY_SAMPLES", "100"))

    # Числовая проверка прямого образа
    PUSHFORWARD_SAMPLES = int(os.getenv("CANFORM_PUSHFORWARD_SAMPLES", "10"))
    PUSHFORWARD_TOL = float(os.getenv("CANFORM_PUSHFORWARD_TOL", "1e-9"))
    ROOT_RESIDUAL_TOL = float(os.getenv("CANFORM_ROOT_RESIDUAL_TOL", "1e-10"))
    BRANCH_POINT_TOL = float(os.getenv("CANFORM_BRANCH_POINT_TOL", "1e-7"))
    MAX_RESAMPLES = int(os.getenv("CANFORM_MAX_RESAMPLES", "5"))

    # Границы размерностей
    MAX_RESIDUAL_DIM = int(os.getenv("CANFORM_MAX_RESIDUAL_DIM", "3"))  # перебор флагов экспоненциален
    MAX_PUSHFORWARD_DIM = int(os.getenv("CANFORM_MAX_PUSHFORWARD_DIM", "2"))
