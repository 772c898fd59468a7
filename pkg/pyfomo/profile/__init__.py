# import objects
from .memory import BufferRecord, MemoryPlan, plan_buffers, plan_memory, count_macs
from .latency import MIN_REPEATS, MCU_THROUGHPUT, LatencyReport, bench_latency, profile_table
