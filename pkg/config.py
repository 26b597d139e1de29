import os

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
FIXTURES_DIR = os.path.join(BASE_DIR, 'data', 'fixtures')

# θ[G] slices are persisted here when set; unset means in-memory only.
CACHE_DIR = os.environ.get('GERMLAB_CACHE_DIR')

DEFAULT_TOL = 1e-9
AMPLIFIED_TOL = 1e-6
MONGE_TOL = 1e-8
# df(0) with smallest singular value at or below this is not an immersion
IMMERSION_TOL = 1e-9

DEFAULT_JET_ORDER = 5
# jet orders; comparisons happen one order lower, at 2..6
GROWTH_K_MIN = 3
GROWTH_K_MAX = 7
COMPLEMENT_LISTING_MAX = 6

SEED = 20180427

# reproduce-suite trial counts
CLOSURE_TRIALS = 100
INVARIANCE_TRIALS = 50
FRONTAL_TRIALS = 20
AK_TRIALS = 50
CONGRUENCE_TRIALS = 20
MONGE_TRIALS = 20
