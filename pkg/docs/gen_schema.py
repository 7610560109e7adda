"""Regenerate the JSON Schema files in docs/schema/ from the live models."""

import json
import pathlib

from gravchan.config import FringeConfig, NoiseConfig, OptimizeConfig, PrepareConfig

HERE = pathlib.Path(__file__).parent

for name, model in (
    ("fringe", FringeConfig),
    ("noise", NoiseConfig),
    ("optimize", OptimizeConfig),
    ("prepare", PrepareConfig),
):
    path = HERE / "schema" / f"{name}.schema.json"
    path.write_text(json.dumps(model.model_json_schema(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")
