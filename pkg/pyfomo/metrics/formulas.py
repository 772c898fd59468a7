# import modules
import numpy
from ..errors import UndefinedMetricError


def per_class_precision(counts):
    """Gets precision per class, 0 where nothing was detected."""
    
    return _ratio(counts.TP, counts.TP + counts.FP)


def per_class_recall(counts):
    """Gets recall per class, 0 where there is no ground truth."""
    
    return _ratio(counts.TP, counts.TP + counts.FN)


def per_class_f1(counts):
    """Gets F1 score per class, 0 where precision and recall are both 0."""
    
    p = per_class_precision(counts)
    r = per_class_recall(counts)
    
    return _ratio(2 * p * r, p + r)


def macro_precision(counts):
    """
    Calculates mean over classes of TP / (TP + FP).
    
    Args:
        counts: pyfomo.ConfusionCounts
            Confusion counts.
    
    Returns:
        float
            Macro precision.
    """
    
    return float(numpy.mean(per_class_precision(counts)))


def macro_recall(counts):
    """
    Calculates mean over classes of TP / (TP + FN).
    
    Args:
        counts: pyfomo.ConfusionCounts
            Confusion counts.
    
    Returns:
        float
            Macro recall.
    """
    
    return float(numpy.mean(per_class_recall(counts)))


def macro_f1(counts):
    """
    Calculates mean over classes of 2PR / (P + R).
    
    Args:
        counts: pyfomo.ConfusionCounts
            Confusion counts.
    
    Returns:
        float
            Macro F1 score.
    """
    
    return float(numpy.mean(per_class_f1(counts)))


def accuracy(counts):
    """
    Calculates (TP + TN) / (TP + TN + FP + FN) with counts summed over
    classes and TN taken at the cell level.
    
    Args:
        counts: pyfomo.ConfusionCounts
            Confusion counts.
    
    Returns:
        float
            Accuracy.
    """
    
    tp = int(counts.TP.sum())
    fp = int(counts.FP.sum())
    fn = int(counts.FN.sum())
    total = tp + counts.TN + fp + fn
    
    if total == 0:
        message = "Accuracy is undefined for empty evaluation!"
        raise UndefinedMetricError(message)
    
    return (tp + counts.TN) / total


def _ratio(num, den):
    """Divides element-wise, 0 for zero denominator."""
    
    num = numpy.asarray(num, dtype=numpy.float64)
    den = numpy.asarray(den, dtype=numpy.float64)
    out = numpy.zeros(numpy.broadcast(num, den).shape)
    
    numpy.divide(num, den, out=out, where=den != 0)
    
    return out
