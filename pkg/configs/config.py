import os

from dotenv import load_dotenv

load_dotenv()


# Pipeline defaults mirror the large-genome experiments
DEFAULT_K = 59
DEFAULT_P = 12
DEFAULT_T = 1000
DEFAULT_SCANNER = "scan"
DEFAULT_WRAP = "hash"
DEFAULT_RC_MODE = True
DEFAULT_SEED = 0

DEFAULT_WORKDIR = os.getenv("MSP_WORKDIR", "msp_work")
DEFAULT_THREADS = int(os.getenv("MSP_THREADS", "1"))
DEFAULT_MEMORY_BUDGET = int(os.getenv("MSP_MEMORY_BUDGET", str(2 * 1024**3)))
DEFAULT_LOG_LEVEL = os.getenv("MSP_LOG_LEVEL", "INFO")

# Rough cost of one dict entry (int key -> int value) in the mapper table
BYTES_PER_TABLE_ENTRY = 120

# Minimizer hash: multiply by a fixed odd 64-bit constant, keep the high 32 bits
HASH_MULTIPLIER = 0x9E3779B97F4A7C15
HASH_MASK_64 = (1 << 64) - 1

# Partition files are sharded into subdirectories of this many files
PARTITIONS_PER_SHARD = 256

# Per-partition write buffer before an append flush
PARTITION_BUFFER_BYTES = 1 << 16

# Ordinals per block when the merger materialises the id stream
MERGE_BLOCK_ORDINALS = 1 << 20

# Distinct edges kept in memory before the aggregator spills sorted runs
EDGE_MAP_MAX_ENTRIES = 5_000_000

# File names inside the work directory
MANIFEST_FILE = "manifest.txt"
PARTITIONS_DIR = "partitions"
REPLACEMENTS_DIR = "replacements"
SPILL_DIR = "spill"
READ_KMERS_FILE = "read_kmers.u32"
ID_STREAM_FILE = "ids.npy"
EDGE_LIST_FILE = "edges.txt"

# Exhaustive capacity distribution is limited to 4^8 words
MAX_EXHAUSTIVE_P = 8
