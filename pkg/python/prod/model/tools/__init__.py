from .dense_codec import DenseCodec, CorruptDenseData
