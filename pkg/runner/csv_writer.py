"""
CSV output with a metadata sidecar.

Floats are written with 17 significant digits so that identical runs give
byte-identical files. <name>.csv.meta.json records the echoed scenario, its
hash, the tool version and the convergence diagnostics.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def meta_path(csv_path: Path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + '.meta.json')


def write_csv(df: pd.DataFrame, path, config, diagnostics: Dict[str, Any]) -> Path:
    """
    Write df to path and its sidecar metadata.

    Args:
        df: Table to write
        path: Output CSV path
        config: ScenarioConfig that produced the table
        diagnostics: Convergence diagnostics (JSON serializable)

    Returns:
        Path of the CSV file
    """
    from runner import __version__

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')

    meta = {
        'config': config.to_dict(),
        'config_sha256': config.sha256(),
        'version': __version__,
        'diagnostics': diagnostics
    }
    with open(meta_path(path), 'w') as f:
        json.dump(meta, f, indent=2, sort_keys=True, default=float)
        f.write('\n')

    logger.info("Saved %d rows to %s", len(df), path)
    return path


def read_meta(path) -> Dict[str, Any]:
    """Load the sidecar of a CSV written by write_csv."""
    with open(meta_path(path), 'r') as f:
        return json.load(f)
