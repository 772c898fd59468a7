# import modules
import time
import logging
import numpy
from ..errors import ConfigError
from ..tensor import Tensor
from .memory import count_macs

# init logger
logger = logging.getLogger(__name__)

# define defaults
MIN_REPEATS = 10
MCU_THROUGHPUT = 5e6


class LatencyReport(object):
    """
    Holds wall-clock inference statistics measured on the host together with
    a projection for a microcontroller of given throughput.
    
    Attributes:
        
        Samples: (float,)
            Single inference times in milliseconds.
        
        Mean: float
            Mean time in milliseconds.
        
        Median: float
            Median time in milliseconds.
        
        P95: float
            95th percentile in milliseconds.
        
        MacCount: int
            Multiply-accumulate operations per inference.
        
        Throughput: float
            Assumed microcontroller MACs per second.
        
        McuProjectionMs: float
            Projected microcontroller latency in milliseconds.
    """
    
    
    def __init__(self, samples, mac_count, throughput=MCU_THROUGHPUT):
        """Initializes a new instance of LatencyReport."""
        
        samples = numpy.asarray(samples, dtype=numpy.float64)
        
        self.Samples = tuple(float(x) for x in samples)
        self.Mean = float(numpy.mean(samples))
        self.Median = float(numpy.median(samples))
        self.P95 = float(numpy.percentile(samples, 95))
        self.MacCount = int(mac_count)
        self.Throughput = float(throughput)
        self.McuProjectionMs = self.MacCount / self.Throughput * 1000.
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "LatencyReport(median=%.3f ms, p95=%.3f ms, mcu=%.1f ms)" % (self.Median, self.P95, self.McuProjectionMs)
    
    
    @property
    def Repeats(self):
        """Gets number of measured inferences."""
        
        return len(self.Samples)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'repeats': self.Repeats,
            'mean_ms': self.Mean,
            'median_ms': self.Median,
            'p95_ms': self.P95,
            'mac_count': self.MacCount,
            'throughput_macs': self.Throughput,
            'mcu_projection_ms': self.McuProjectionMs}


def bench_latency(model, image=None, repeats=50, throughput=MCU_THROUGHPUT, warmup=3):
    """
    Measures wall-clock time of single-image inference. Warm-up runs are not
    included in the statistics.
    
    Args:
        model: pyfomo.FomoModel
            Model to measure.
        
        image: pyfomo.Tensor or None
            Input image. If not specified, mid-gray image is used.
        
        repeats: int
            Number of measured runs, at least 10.
        
        throughput: float
            Microcontroller MACs per second for the projection.
        
        warmup: int
            Number of unmeasured runs.
    
    Returns:
        pyfomo.LatencyReport
            Latency statistics.
    """
    
    # check params
    if repeats < MIN_REPEATS:
        message = "At least %d repeats are needed! --> '%s'" % (MIN_REPEATS, repeats)
        raise ConfigError(message)
    
    if not throughput > 0:
        message = "Throughput must be positive! --> '%s'" % throughput
        raise ConfigError(message)
    
    # init image
    if image is None:
        image = Tensor(numpy.full(model.InputShape, 0.5, dtype=numpy.float32))
    
    # warm up
    for i in range(warmup):
        model.Forward(image)
    
    # measure
    samples = []
    for i in range(repeats):
        start = time.perf_counter()
        model.Forward(image)
        samples.append((time.perf_counter() - start) * 1000.)
    
    report = LatencyReport(samples, count_macs(model), throughput)
    
    logger.info("%s %d: median %.3f ms, projected %.1f ms", model.FormatTag, model.Config.InputSize, report.Median, report.McuProjectionMs)
    
    return report


def profile_table(rows):
    """
    Creates summary table of profiled models.
    
    Args:
        rows: ((pyfomo.FomoModel, pyfomo.MemoryPlan, pyfomo.LatencyReport or None),)
            Profiled models.
    
    Returns:
        str
            Formatted table.
    """
    
    lines = ["%-6s %6s %10s %12s %12s %12s" % ("format", "input", "PRO KB", "latency ms", "MCU ms", "weights KB")]
    
    for model, plan, latency in rows:
        
        host = "%12.3f" % latency.Median if latency else "%12s" % "-"
        mcu = latency.McuProjectionMs if latency else count_macs(model) / MCU_THROUGHPUT * 1000.
        
        lines.append("%-6s %6d %10.1f %s %12.1f %12.1f" % (
            model.FormatTag, model.Config.InputSize, plan.PeakBytes / 1024., host, mcu, plan.WeightBytes / 1024.))
    
    return "\n".join(lines)
