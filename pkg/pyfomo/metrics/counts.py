# import modules
import numpy
from ..enums import *
from ..errors import ConfigError


class ConfusionCounts(object):
    """
    Holds detection confusion counts. True positives, false positives and
    false negatives are counted per foreground class at the object level,
    true negatives are counted at the cell level.
    
    Attributes:
        
        NumClasses: int
            Number of foreground classes.
        
        TP: numpy.ndarray
            True positives per class.
        
        FP: numpy.ndarray
            False positives per class.
        
        FN: numpy.ndarray
            False negatives per class.
        
        TN: int
            Cells with neither ground-truth object nor positive cell.
    """
    
    
    def __init__(self, num_classes, tp=None, fp=None, fn=None, tn=0):
        """
        Initializes a new instance of ConfusionCounts.
        
        Args:
            num_classes: int
                Number of foreground classes.
            
            tp: (int,) or None
                True positives per class.
            
            fp: (int,) or None
                False positives per class.
            
            fn: (int,) or None
                False negatives per class.
            
            tn: int
                Cell-level true negatives.
        """
        
        if num_classes < 1:
            message = "At least one class is needed! --> '%s'" % num_classes
            raise ConfigError(message)
        
        self.NumClasses = int(num_classes)
        self.TP = self._init_counts(tp)
        self.FP = self._init_counts(fp)
        self.FN = self._init_counts(fn)
        self.TN = int(tn)
        
        if self.TN < 0:
            message = "Counts must be non-negative! --> '%d'" % self.TN
            raise ConfigError(message)
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "ConfusionCounts(TP=%s, FP=%s, FN=%s, TN=%d)" % (self.TP.tolist(), self.FP.tolist(), self.FN.tolist(), self.TN)
    
    
    def __eq__(self, other):
        """Compares two count sets."""
        
        if not isinstance(other, ConfusionCounts):
            return False
        
        return self.ToJSON() == other.ToJSON()
    
    
    def Add(self, other):
        """
        Adds counts of another set into current one.
        
        Args:
            other: pyfomo.ConfusionCounts
                Counts to add.
        """
        
        if other.NumClasses != self.NumClasses:
            message = "Number of classes does not match! --> '%d' vs '%d'" % (other.NumClasses, self.NumClasses)
            raise ConfigError(message)
        
        self.TP += other.TP
        self.FP += other.FP
        self.FN += other.FN
        self.TN += other.TN
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'tp': self.TP.tolist(),
            'fp': self.FP.tolist(),
            'fn': self.FN.tolist(),
            'tn': self.TN}
    
    
    def _init_counts(self, values):
        """Converts counts into array."""
        
        if values is None:
            return numpy.zeros(self.NumClasses, dtype=numpy.int64)
        
        values = numpy.array(values, dtype=numpy.int64).reshape(-1)
        
        if values.size != self.NumClasses:
            message = "Counts do not match number of classes! --> '%d' vs '%d'" % (values.size, self.NumClasses)
            raise ConfigError(message)
        
        if values.size and values.min() < 0:
            message = "Counts must be non-negative! --> '%s'" % values.tolist()
            raise ConfigError(message)
        
        return values


def match_detections(detections, objects, tolerance_cells=1.0, cell_size=CELL_SIZE, grid_size=None, num_classes=None):
    """
    Matches detections to ground-truth objects of single image. Detections are
    processed by descending confidence, each taking the nearest unmatched
    same-class object within tolerance_cells * cell_size pixels.
    
    Args:
        detections: (pyfomo.Detection,)
            Decoded detections.
        
        objects: ((int, float, float),)
            Ground-truth objects as (class_id, x, y) in pixels.
        
        tolerance_cells: float
            Matching distance in cell widths.
        
        cell_size: int
            Cell size in pixels.
        
        grid_size: int or None
            Number of cells along each side to count true negatives. If not
            specified, true negatives are not counted.
        
        num_classes: int or None
            Number of foreground classes. If not specified, the largest class
            id seen is used.
    
    Returns:
        pyfomo.ConfusionCounts
            Image counts.
    """
    
    # check tolerance
    if not tolerance_cells > 0:
        message = "Matching tolerance must be positive! --> '%s'" % tolerance_cells
        raise ConfigError(message)
    
    # get number of classes
    if num_classes is None:
        seen = [d.ClassId for d in detections] + [o[0] for o in objects]
        num_classes = max(seen + [1])
    
    counts = ConfusionCounts(num_classes)
    limit = tolerance_cells * cell_size
    matched = [False] * len(objects)
    
    # match by descending confidence
    order = sorted(range(len(detections)), key=lambda i: -detections[i].Confidence)
    
    for i in order:
        det = detections[i]
        
        best = None
        best_dist = None
        
        for j, (class_id, x, y) in enumerate(objects):
            
            if matched[j] or class_id != det.ClassId:
                continue
            
            dist = numpy.hypot(det.X - x, det.Y - y)
            if dist <= limit and (best is None or dist < best_dist):
                best = j
                best_dist = dist
        
        if best is None:
            counts.FP[det.ClassId-1] += 1
        else:
            matched[best] = True
            counts.TP[det.ClassId-1] += 1
    
    # count missed objects
    for j, (class_id, x, y) in enumerate(objects):
        if not matched[j]:
            counts.FN[class_id-1] += 1
    
    # count negative cells
    if grid_size is not None:
        occupied = set()
        
        for class_id, x, y in objects:
            occupied.add(_cell_of(x, y, cell_size, grid_size))
        
        for det in detections:
            if det.Cells:
                occupied.update((r, c) for r, c, p in det.Cells)
            else:
                occupied.add(_cell_of(det.X, det.Y, cell_size, grid_size))
        
        counts.TN = grid_size * grid_size - len(occupied)
    
    return counts


def _cell_of(x, y, cell_size, grid_size):
    """Gets cell containing given position."""
    
    col = min(max(int(numpy.floor(x / cell_size)), 0), grid_size - 1)
    row = min(max(int(numpy.floor(y / cell_size)), 0), grid_size - 1)
    
    return row, col
