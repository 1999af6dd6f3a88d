#!/usr/bin/env python3
"""LoS/NLoS channel classification on a synthetic drive-test scene.

Builds a scene, walks a route, trains the model families on both the
fine-granular per-path records and the windowed aggregates, and prints the
ranked comparison the way a model-selection report would.
"""

from pathlib import Path

import numpy as np

from thzmac.lospredict import (SceneConfig, aggregate, aggregates_to_dataset,
                               comparison_to_csv, generate_scene,
                               records_to_dataset, train_los_models)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

cfg = SceneConfig(n_obstacles=14, obstacle_size_range=(10.0, 35.0),
                  route_length_m=4000.0, step_m=1.0, noise_sigma=2.5,
                  seed=31)
records, rects = generate_scene(cfg)
los_share = np.mean([r.los for r in records])
print(f"scene: {len(rects)} obstacles, route of {len(records)} steps, "
      f"{los_share:.1%} LoS")

fine = records_to_dataset(records)
coarse = aggregates_to_dataset(aggregate(records, 10))
print(f"fine-granular rows: {len(fine)}; aggregate rows (window 10): "
      f"{len(coarse)}")

for name, dataset in (("fine", fine), ("aggregate", coarse)):
    rows = train_los_models(dataset, ["dt", "rf", "nb"], seed=3,
                            hyper={"rf": {"n_trees": 30}})
    path = OUT / f"los_compare_{name}.csv"
    comparison_to_csv(rows, path)
    print(f"\n{name} dataset, ranked by accuracy then time "
          f"-> {path.name}")
    for r in rows:
        print(f"  {r.kind:>3}: accuracy {r.accuracy:.2%}, "
              f"train {r.train_seconds * 1e3:6.1f} ms, "
              f"score {r.score_seconds * 1e3:6.1f} ms")
