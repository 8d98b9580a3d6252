from .streams import stream, derive_seed, label_key
