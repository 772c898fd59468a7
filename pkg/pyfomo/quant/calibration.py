# import modules
import json
import numpy
from ..enums import *
from ..errors import ConfigError


class CalibrationStats(object):
    """
    Holds observed value ranges of every activation tensor of a model. Each
    range always includes zero so that real zero stays representable.
    
    Attributes:
        
        Ranges: {str: (float, float)}
            Observed (min, max) by tensor name.
        
        SampleCount: int
            Number of observed images.
    """
    
    
    def __init__(self, ranges=None, sample_count=0):
        """
        Initializes a new instance of CalibrationStats.
        
        Args:
            ranges: {str: (float, float)} or None
                Observed ranges by tensor name.
            
            sample_count: int
                Number of observed images.
        """
        
        self.Ranges = {}
        self.SampleCount = int(sample_count)
        
        for name, (lo, hi) in (ranges or {}).items():
            if lo > hi:
                message = "Range minimum exceeds maximum! --> '%s' (%s, %s)" % (name, lo, hi)
                raise ConfigError(message)
            self.Ranges[name] = (float(lo), float(hi))
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "CalibrationStats(%d tensors, %d samples)" % (len(self.Ranges), self.SampleCount)
    
    
    def __eq__(self, other):
        """Compares two stats."""
        
        if not isinstance(other, CalibrationStats):
            return False
        
        return self.Ranges == other.Ranges and self.SampleCount == other.SampleCount
    
    
    def __contains__(self, name):
        """Checks whether range of given tensor is known."""
        
        return name in self.Ranges
    
    
    def Observe(self, name, values):
        """
        Extends range of given tensor by observed values.
        
        Args:
            name: str
                Tensor name.
            
            values: numpy.ndarray
                Observed values.
        """
        
        lo, hi = self.Ranges.get(name, (0.0, 0.0))
        
        values = numpy.asarray(values)
        if values.size:
            lo = min(lo, float(values.min()))
            hi = max(hi, float(values.max()))
        
        self.Ranges[name] = (lo, hi)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'sample_count': self.SampleCount,
            'ranges': {k: list(v) for k, v in sorted(self.Ranges.items())}}
    
    
    @staticmethod
    def FromJSON(data):
        """Creates stats from JSON-like object."""
        
        return CalibrationStats(
            ranges = {k: tuple(v) for k, v in data['ranges'].items()},
            sample_count = data['sample_count'])


def calibrate(model, images, batch_size=32):
    """
    Runs real-valued model over calibration images and records the range of
    every activation tensor.
    
    Args:
        model: pyfomo.FomoModel
            Real-valued model.
        
        images: numpy.ndarray
            Calibration images (n, s, s, 3).
        
        batch_size: int
            Number of images run at once.
    
    Returns:
        pyfomo.CalibrationStats
            Observed ranges.
    """
    
    if model.IsQuantized:
        message = "Calibration needs real-valued model! --> '%s'" % model.FormatTag
        raise ConfigError(message)
    
    if len(images) == 0:
        message = "Calibration set is empty!"
        raise ConfigError(message)
    
    stats = CalibrationStats()
    
    for start in range(0, len(images), batch_size):
        batch = images[start:start+batch_size]
        
        for name, values in model.Trace(batch).items():
            stats.Observe(name, values)
        
        stats.SampleCount += len(batch)
    
    return stats


def merge_stats(a, b):
    """
    Merges two calibration stats by element-wise range union.
    
    Args:
        a: pyfomo.CalibrationStats
            First stats.
        
        b: pyfomo.CalibrationStats
            Second stats.
    
    Returns:
        pyfomo.CalibrationStats
            Merged stats.
    """
    
    ranges = dict(a.Ranges)
    
    for name, (lo, hi) in b.Ranges.items():
        if name in ranges:
            ranges[name] = (min(ranges[name][0], lo), max(ranges[name][1], hi))
        else:
            ranges[name] = (lo, hi)
    
    return CalibrationStats(ranges, a.SampleCount + b.SampleCount)


def calibration_subset(count, size=32, seed=42):
    """
    Chooses calibration images by seed.
    
    Args:
        count: int
            Number of available images.
        
        size: int
            Number of images to choose.
        
        seed: int
            Random seed.
    
    Returns:
        numpy.ndarray
            Sorted image indices.
    """
    
    if count < 1:
        message = "Calibration set is empty!"
        raise ConfigError(message)
    
    rng = numpy.random.default_rng(seed)
    order = rng.permutation(count)
    
    return numpy.sort(order[:min(size, count)])


def save_stats(stats, path):
    """Writes calibration stats as JSON document."""
    
    with open(path, 'w', encoding='utf-8') as wf:
        json.dump(stats.ToJSON(), wf, indent=4, ensure_ascii=False)


def load_stats(path):
    """Reads calibration stats from JSON document."""
    
    with open(path, 'r', encoding='utf-8') as rf:
        return CalibrationStats.FromJSON(json.load(rf))
