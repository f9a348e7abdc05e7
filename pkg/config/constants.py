"""
config/constants.py
Константы движка: допуски, сетки, идентификаторы проверок
"""
import math

# ===== СТРУИ =====
EPS_DIV_FACTOR = 1e-12  # относительный порог сингулярного деления
MAX_JET_ORDER = 24
RESIDUAL_ORDER = 2  # для -ψ'' + uψ - λψ достаточно второго порядка

# ===== НОРМАЛИЗАЦИЯ =====
TINY = 1e-300

# ===== СЕМЕЙСТВА =====
FAMILIES = ("morse", "ginocchio")
MORSE_MAX_LEVELS = 3
GINOCCHIO_MAX_LEVELS = 4
GEGENBAUER_MAX_DEGREE = 3

DEFAULT_PARAMS = {
    "morse": {"A": 2.0 * math.sqrt(2.0), "alpha": 1.0},
    "ginocchio": {"beta": 0.8, "upsilon": 4.0},
}

DEFAULT_LEVELS = {"morse": MORSE_MAX_LEVELS, "ginocchio": GINOCCHIO_MAX_LEVELS}

# Полоса |y| < 0.05 у Гинокио: полюс h_1 в y = 0
GINOCCHIO_Y_BAND = 0.05

# ===== СЕТКИ =====
DEFAULT_GRIDS = {
    "morse": (-3.0, 3.0, 121),
    "ginocchio": (-2.5, 2.5, 101),
}
NODE_SCAN_REFINEMENT = 10
NODE_EXCLUSION_SPACINGS = 2

# ===== МЕТОДЫ И НАБОРЫ ПРОВЕРОК =====
METHODS = ("crum", "darboux", "both", "si")
SUITES = ("crum-darboux", "shape-invariance", "wronskian-identities", "residuals", "all")

# ===== ДОПУСКИ ПО УМОЛЧАНИЮ =====
DEFAULT_TOLERANCES = {
    "morse": {
        "equivalence": 1e-8,
        "closed_form": 1e-8,
        "residual": 1e-6,
        "si_condition": 1e-9,
        "ladder": 1e-12,
        "pairwise_si": 1e-8,
        "wavefunction_si": 1e-8,
        "corollary": 1e-7,
        "wronskian": 1e-9,
        "jacobi": 1e-9,
    },
    "ginocchio": {
        "equivalence": 1e-6,
        "closed_form": 1e-6,
        "residual": 1e-6,
        "si_condition": 1e-9,
        "ladder": 1e-12,
        "pairwise_si": 1e-8,
        "wavefunction_si": 1e-8,
        "corollary": 1e-7,
        "wronskian": 1e-8,
        "jacobi": 1e-9,
    },
}
TOLERANCE_KEYS = tuple(DEFAULT_TOLERANCES["morse"].keys())

# Случайные матрицы для теоремы Якоби
JACOBI_SIZES = (4, 5)
JACOBI_COUNT = 100
JACOBI_RANK = 2
JACOBI_SEED = 20240607
JACOBI_ENTRY_RANGE = (-9, 9)

# ===== ИДЕНТИФИКАТОРЫ ПРОВЕРОК (стабильные строки для отчётов) =====
CHECK_IDS = {
    "equivalence_potential": "crum-darboux-equivalence/potential",
    "equivalence_state": "crum-darboux-equivalence/state",
    "closed_form_potential": "closed-form/potential",
    "closed_form_state": "closed-form/state",
    "h_ratio": "h-ratio/second-iterate",
    "residual": "isospectrality/residual",
    "wronskian_derivative": "wronskian-derivative/bumped-row",
    "two_wronskian": "two-wronskian-identity",
    "jacobi": "jacobi-minors",
    "jacobi_wronskian": "jacobi-minors/wronskian-matrix",
    "si_condition": "shape-invariance/condition",
    "ladder": "shape-invariance/eigenvalue-ladder",
    "wavefunction_si": "shape-invariance/wavefunction",
    "pairwise_si": "shape-invariance/pairwise-potential",
    "corollary": "shape-invariance/three-way-equality",
}

# Ссылки на утверждения, к которым привязана каждая проверка
CHECK_ANCHORS = {
    CHECK_IDS["equivalence_potential"]: "Thm-III.1",
    CHECK_IDS["equivalence_state"]: "Thm-III.1",
    CHECK_IDS["closed_form_potential"]: "Sec-IV",
    CHECK_IDS["closed_form_state"]: "Sec-IV",
    CHECK_IDS["h_ratio"]: "Eq-(G3)",
    CHECK_IDS["residual"]: "Eq-(113)",
    CHECK_IDS["wronskian_derivative"]: "Lemma-II.1",
    CHECK_IDS["two_wronskian"]: "Lemma-II.2",
    CHECK_IDS["jacobi"]: "App-A",
    CHECK_IDS["jacobi_wronskian"]: "App-A",
    CHECK_IDS["si_condition"]: "Sec-V",
    CHECK_IDS["ladder"]: "Lemma-V.1",
    CHECK_IDS["wavefunction_si"]: "Thm-V.3",
    CHECK_IDS["pairwise_si"]: "Thm-V.3",
    CHECK_IDS["corollary"]: "Cor-V.4",
}

# ===== ВЫВОД =====
CSV_FLOAT_FORMAT = ".17g"
JSON_INDENT = 2
