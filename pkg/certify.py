import json
import os
import sys

from src.app_config import configure_logging, load_config
from src.cli import ambient_facts
from src.hassett import divisor_label, rational_loci, star_values, sweep
from src.utils import build_document, dumps_document, export_sweep_csv, rational_loci_to_dict, sweep_to_dict

# ============ CONFIG SETUP ============
config = load_config()
configure_logging(config)
MAX_D = config["certify"]["max_d"]
ADMISSIBLE_MAX = config["certify"]["admissible_max"]
OUTPUT_DIR = config["certify"]["output_dir"]
SCHEMA_VERSION = config["report"]["schema_version"]
JOBS = max(1, config["sweep"]["jobs"])

os.makedirs(OUTPUT_DIR, exist_ok=True)
all_passed = True


def save(name, command, inputs, report):
    path = os.path.join(OUTPUT_DIR, name)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_document(build_document(command, inputs, report, SCHEMA_VERSION)))
    print(f"💾 Saved {path}")


# ============ AMBIENT LATTICE ============
print("Step 1: Checking the ambient lattice L and its primitive part L0...")

facts = ambient_facts()
save("ambient.json", "ambient", {"check": True}, {**facts, "abs_det": str(facts["abs_det"])})
if facts["checks_pass"]:
    print("✅ L has signature (21,2) and |det| 1; L0 is even of rank 22 with |det| 3.")
else:
    print("⚠️ Ambient lattice checks failed.")
    all_passed = False

# ============ PAIR + TRIPLE SWEEP ============
print(f"\nStep 2: Verifying pair and triple witnesses for every (*) pair up to d={MAX_D}...")

summary = sweep(MAX_D, jobs=JOBS, progress=True)
save("sweep.json", "sweep", {"max": MAX_D}, sweep_to_dict(summary))
export_sweep_csv(summary, os.path.join(OUTPUT_DIR, "sweep.csv"))
if summary.passed:
    print(f"✅ {summary.pairs_checked} pairs over {len(summary.values)} discriminants, 0 failures.")
else:
    print(f"⚠️ {len(summary.failures)} witness(es) failed; see sweep.json.")
    all_passed = False

# ============ RATIONAL LOCI ============
print(f"\nStep 3: Checking the three rational loci for every (*) d up to {MAX_D}...")

loci = [rational_loci(d) for d in star_values(MAX_D)]
save("rational_loci.json", "rational-loci", {"max": MAX_D}, {
    "loci": [rational_loci_to_dict(item) for item in loci],
    "pass": all(item.passed for item in loci),
})
bad = [item.d for item in loci if not item.passed]
if not bad:
    print(f"✅ {len(loci)} discriminants, each with three passing witnesses of distinct determinants.")
else:
    print(f"⚠️ Rational loci failed for d in {bad}.")
    all_passed = False

# ============ ADMISSIBLE VALUES ============
print(f"\nStep 4: Sieving admissible discriminants up to {ADMISSIBLE_MAX}...")

admissible = [d for d in range(7, ADMISSIBLE_MAX + 1) if divisor_label(d).admissible]
save("admissible.json", "admissible", {"max": ADMISSIBLE_MAX, "star_only": False}, {
    "sieve": "admissible",
    "rows": [{"d": d, "star": True, "admissible": True} for d in admissible],
})
print(f"✅ Admissible values: {json.dumps(admissible)}")

print("\n✅ Certificate bundle complete." if all_passed else "\n⚠️ Certificate bundle has failures.")
sys.exit(0 if all_passed else 1)
