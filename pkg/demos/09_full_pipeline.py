"""All eleven models, the comparison and summary tables, written to disk."""
import sys
import tempfile
from pathlib import Path

from selekta.report import PipelineConfig, emit_comparison, emit_summary, run_pipeline, write_bundle

from _common import SEED, panel

data = panel()
bundle = run_pipeline(data, PipelineConfig(seed=SEED))
print(emit_comparison(bundle.comparison)["text"])
print(emit_summary(bundle.summary, data.feature_codes)["text"])

# pinning replaces a search with a fixed subset (the refit is still computed)
pinned = run_pipeline(data, PipelineConfig(methods=("full", "ga"), pins={"ga": ("EG", "FDI", "TOUR", "URB")},
                                           lmg=False))
print(emit_comparison(pinned.comparison)["text"])

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="selekta-demo-"))
for name in write_bundle(bundle, out):
    print(out / name)
