"""
Render Dump

Writes contact-area images of the configured pegs for inspection.
"""

import logging

import pandas as pd

from harness.experiments.runner import ExperimentResult
from harness.schemas import ExperimentConfig
from harness.storage import RunStorage, config_hash
from sim.rendering import get_peg, render_tactile
from tactile.imagekit.pgm import write_image

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["peg", "tilt_deg", "surface_noise", "filename", "mass"]


async def run_render(cfg: ExperimentConfig) -> ExperimentResult:
    """Render every peg at every configured tilt to PGM files."""
    digest = config_hash(cfg)
    storage = RunStorage(cfg.kind, digest, cfg.output_dir)
    storage.write_snapshot(cfg)

    rows = []
    for name in cfg.pegs:
        peg = get_peg(name, cfg.noise_level)
        for tilt in cfg.render_tilts_deg:
            img = render_tactile(peg, tilt, cfg.master_seed)
            filename = f"renders/{name}_{tilt:+06.1f}.pgm"
            write_image(img, storage.path(filename))
            rows.append(
                {
                    "peg": name,
                    "tilt_deg": tilt,
                    "surface_noise": peg.surface_noise,
                    "filename": filename,
                    "mass": float(img.pixels.sum()),
                }
            )

    table = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    storage.write_csv(table)
    logger.info(f"Rendered {len(rows)} images to {storage.run_dir / 'renders'}")
    return ExperimentResult(table=table, run_dir=storage.run_dir)
