import sys
from pathlib import Path

import pytest

# allow running the suite without installing the package
SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from cftheta import RigorousReal, theta_sequence  # noqa: E402
from cftheta.fixtures import PI_MINUS_3  # noqa: E402

# digits a_1.. and first convergents of pi - 3, exactly as published and as
# reproduced by every independent computation in this suite
PI_DIGITS_13 = (7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2)
PI_CONVERGENTS_10 = (
    (0, 1),
    (1, 7),
    (15, 106),
    (16, 113),
    (4687, 33102),
    (4703, 33215),
    (9390, 66317),
    (14093, 99532),
    (37576, 265381),
    (51669, 364913),
)

# theta_0..theta_9 of pi - 3 rounded to the nearest 4 decimals, frozen from
# the definition-based oracle (q_n^2*|x - p_n/q_n| with exact big-rational
# convergents and a 1000-digit seed enclosure)
PI_THETA_4DEC = (
    "0.1416",
    "0.0620",
    "0.9351",
    "0.0034",
    "0.6332",
    "0.3659",
    "0.5381",
    "0.2887",
    "0.6138",
    "0.2145",
)


@pytest.fixture(scope="session")
def pi_seed():
    return RigorousReal.from_decimal(PI_MINUS_3)


@pytest.fixture(scope="session")
def pi_thetas(pi_seed):
    return theta_sequence(pi_seed, 13)
