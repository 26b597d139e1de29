import argparse
import os
import sys
from tqdm import tqdm
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import config
from analysis import g_fields
from analysis.lie_catalog import catalog_groups


def build_cache(max_p=4, max_degree=config.DEFAULT_JET_ORDER):
    jobs = [(g, d) for p in range(1, max_p + 1) for g in catalog_groups(p) for d in range(max_degree + 1)]
    print(f"Solving {len(jobs)} θ[G] slices into {config.CACHE_DIR}...")
    dims = {}
    for g, d in tqdm(jobs):
        dims[(g.spec, d)] = g_fields.theta_g_degree(g, d).dim
    return dims


def main(argv=None):
    parser = argparse.ArgumentParser(description="Pre-fill the θ[G] slice cache.")
    parser.add_argument('--max-p', type=int, default=4)
    parser.add_argument('--max-degree', type=int, default=config.DEFAULT_JET_ORDER)
    parser.add_argument('--cache-dir', default=config.CACHE_DIR)
    args = parser.parse_args(argv)

    if not args.cache_dir:
        print("[WARN] No cache directory: pass --cache-dir or set GERMLAB_CACHE_DIR.")
        return 1
    config.CACHE_DIR = args.cache_dir
    os.makedirs(config.CACHE_DIR, exist_ok=True)

    dims = build_cache(args.max_p, args.max_degree)
    print(f"[INFO] Cached {len(dims)} slices.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
