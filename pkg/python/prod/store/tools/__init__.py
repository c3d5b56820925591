from .table_codec import TableCodec, TableHeader, CorruptTableData
