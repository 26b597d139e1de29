import os
import sys
from tqdm import tqdm
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import config
import data

# --- FIXTURE CORPUS ---
# (name, n, order, components, provenance, tags)
SIN = "x1 - 1/6*x1^3 + 1/120*x1^5 - 1/5040*x1^7"
ONE_MINUS_COS = "1/2*x1^2 - 1/24*x1^4 + 1/720*x1^6 - 1/40320*x1^8"

FIXTURES = [
    ("cusp", 1, 8, ["x1^2", "x1^3"],
     "ordinary cusp; A_1 first component with h(x) = x", ["curve", "ak"]),
    ("a1_curve", 1, 8, ["x1^2", "x1^3 + 1/2*x1^4"],
     "A_1 normal form (x^2, x^2 h) with h = x + x^2/2", ["curve", "ak"]),
    ("a2_curve", 1, 8, ["-x1^3", "x1^4 - x1^5"],
     "A_2 normal form (-x^3, x^3 h) with h = x - x^2", ["curve", "ak"]),
    ("a3_curve", 1, 8, ["x1^4", "x1^5 + 2*x1^6"],
     "A_3 normal form (x^4, x^4 h) with h = x + 2x^2", ["curve", "ak"]),
    ("a4_curve", 1, 8, ["-x1^5", "x1^6 + x1^7 - 1/3*x1^8"],
     "A_4 normal form (-x^5, x^5 h) with h = x + x^2 - x^3/3", ["curve", "ak"]),
    ("parabola", 1, 8, ["x1", "x1^2"],
     "regular curve with curvature 2 at 0 and vanishing equi-affine curvature", ["curve", "regular"]),
    ("circle", 1, 8, [SIN, ONE_MINUS_COS],
     "unit circle through 0, Taylor jets of (sin x, 1 - cos x)", ["curve", "regular"]),
    ("ellipse", 1, 8, ["2*x1 - 1/3*x1^3 + 1/60*x1^5 - 1/2520*x1^7", ONE_MINUS_COS],
     "ellipse (2 sin x, 1 - cos x) with semi-axes 2 and 1; equi-affine curvature 2^(-2/3)", ["curve", "regular"]),
    ("plane_regular", 2, 6, ["x1", "x2"],
     "simple A[SO(2)] germ list over R: (x1, x2)", ["plane", "simple"]),
    ("plane_fold", 2, 6, ["x1", "x2^2"],
     "simple A[SO(2)] germ list over R: (x1, x2^2); stated over C, computed over Q", ["plane", "simple"]),
    ("plane_cusp", 2, 6, ["x1", "x1*x2 + x2^3"],
     "simple A[SO(2)] germ list over R: (x1, x1 x2 + x2^3); stated over C, computed over Q", ["plane", "simple"]),
    ("plane_lips", 2, 6, ["x1", "x2^3 + x1^2*x2"],
     "simple A[SO(2)] germ list over R: (x1, x2^3 + x1^k x2), k = 2; stated over C, computed over Q",
     ["plane", "simple"]),
    ("plane_lips_k3", 2, 6, ["x1", "x2^3 + x1^3*x2"],
     "simple A[SO(2)] germ list over R: (x1, x2^3 + x1^k x2), k = 3; stated over C, computed over Q",
     ["plane", "simple"]),
    ("plane_swallowtail", 2, 6, ["x1", "x1*x2 + x2^4"],
     "simple A[SO(2)] germ list over R: (x1, x1 x2 + x2^4); stated over C, computed over Q",
     ["plane", "simple"]),
    ("dufour", 2, 6, ["x1", "x1^3 + x1*x2", "x2"],
     "germ (x1, x1^3 + x1 x2, x2) built from the plane cusp map (x1^3 + x1 x2, x2)", ["surface", "projection"]),
    ("monge_plane", 2, 5, ["x1", "x2", "0"],
     "flat plane; every Monge coefficient vanishes", ["surface", "monge"]),
    ("monge_saddle", 2, 5, ["x1", "x2", "x1^2 - x2^2"],
     "graph with lambda1 = 1, lambda2 = -1 and no cubic part", ["surface", "monge"]),
    ("monge_generic", 2, 5, ["x1", "x2", "2*x1^2 + 1/2*x2^2 + x1^3 - x1*x2^2 + 1/3*x2^3"],
     "graph with distinct lambdas and a nonzero cubic part", ["surface", "monge"]),
    ("surface_r4", 2, 6, ["x1", "x2", "x1^2 + x1*x2", "x2^2 - x1^3"],
     "immersed surface in R^4 used for the SO(4) / SO(3) moduli bound", ["surface", "r4"]),
]


def fixture_payload(name, n, order, components, provenance, tags):
    payload = {
        'name': name,
        'n': n,
        'p': len(components),
        'order': order,
        'components': components,
        'exact_germ': True,
        'provenance': provenance,
        'tags': tags,
    }
    # every fixture must parse before it is written
    data.germ_file_from_dict(payload, name).to_germ()
    return payload


def main():
    print(f"Writing {len(FIXTURES)} fixtures to {config.FIXTURES_DIR}...")
    for name, n, order, components, provenance, tags in tqdm(FIXTURES):
        path = os.path.join(config.FIXTURES_DIR, f"{name}.json")
        data.write_json(path, fixture_payload(name, n, order, components, provenance, tags))
    print("[INFO] Fixtures rebuilt.")


if __name__ == "__main__":
    main()
