"""uipref: turn designer feedback on generated UIs into machine-learnable data.

Subpackages:
    corpus    data model and file-backed store for descriptions, candidates,
              preference pairs
    htmlkit   HTML analysis: image extraction, DOM geometry, IoU grounding,
              snippet extraction, asset staging
    gateway   clients (with deterministic stubs) for generation, editing,
              rendering, image synthesis, sketch conversion, embeddings
    feedback  the four annotation interfaces' records and their transforms
              into preference pairs
    reward    embedding combination, linear reward head, margin-loss trainer,
              top-k candidate filtering
    pairgen   scored-batch construction and ORPO-format alignment-pair export
    arena     blind pairwise evaluation: Elo, bootstrap CIs, win rates,
              agreement analysis
    service   HTTP API and CLI binding everything together
"""

__version__ = "0.1.0"
