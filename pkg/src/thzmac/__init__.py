"""Intelligent MAC toolkit for dense directional wireless networks.

Subpackages cover the full pipeline: network snapshot generation
(:mod:`thzmac.topology`), association scoring (:mod:`thzmac.scoring`),
metaheuristic search (:mod:`thzmac.search`), relative labeling
(:mod:`thzmac.labeling`), in-repo supervised learning (:mod:`thzmac.learn`),
offline/online orchestration (:mod:`thzmac.pipeline`), a beam-selection
environment (:mod:`thzmac.beamsim`), and LoS/NLoS channel classification
(:mod:`thzmac.lospredict`).
"""

__version__ = "0.1.0"
