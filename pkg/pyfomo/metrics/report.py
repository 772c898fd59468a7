# import modules
import json
from ..enums import *
from ..errors import ConfigError
from ..decode import detect_batch
from .counts import ConfusionCounts, match_detections
from .formulas import macro_precision, macro_recall, macro_f1, accuracy
from .formulas import per_class_precision, per_class_recall, per_class_f1


class MetricsReport(object):
    """
    Holds evaluation metrics calculated from aggregated confusion counts.
    Per-class ratios with zero denominator are defined as 0.
    
    Attributes:
        
        Counts: pyfomo.ConfusionCounts
            Aggregated counts.
        
        ClassNames: (str,)
            Foreground class names.
        
        MacroPrecision: float
            Mean per-class precision.
        
        MacroRecall: float
            Mean per-class recall.
        
        MacroF1: float
            Mean per-class F1 score.
        
        Accuracy: float
            Cell-level accuracy.
    """
    
    
    def __init__(self, counts, class_names=None):
        """
        Initializes a new instance of MetricsReport.
        
        Args:
            counts: pyfomo.ConfusionCounts
                Aggregated counts.
            
            class_names: (str,) or None
                Foreground class names.
        """
        
        if class_names is None:
            class_names = ["class%d" % (i+1) for i in range(counts.NumClasses)]
        
        if len(class_names) != counts.NumClasses:
            message = "Class names do not match counts! --> '%d' vs '%d'" % (len(class_names), counts.NumClasses)
            raise ConfigError(message)
        
        self.Counts = counts
        self.ClassNames = tuple(class_names)
        
        self.MacroPrecision = macro_precision(counts)
        self.MacroRecall = macro_recall(counts)
        self.MacroF1 = macro_f1(counts)
        self.Accuracy = accuracy(counts)
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "MetricsReport(F1=%.4f, Recall=%.4f, Precision=%.4f, Accuracy=%.4f)" % (self.MacroF1, self.MacroRecall, self.MacroPrecision, self.Accuracy)
    
    
    @property
    def PerClass(self):
        """
        Gets per-class breakdown.
        
        Returns:
            ({str: ?},)
                Per-class name, counts, precision, recall and F1.
        """
        
        precision = per_class_precision(self.Counts)
        recall = per_class_recall(self.Counts)
        f1 = per_class_f1(self.Counts)
        
        items = []
        for i, name in enumerate(self.ClassNames):
            items.append({
                'class': name,
                'tp': int(self.Counts.TP[i]),
                'fp': int(self.Counts.FP[i]),
                'fn': int(self.Counts.FN[i]),
                'precision': float(precision[i]),
                'recall': float(recall[i]),
                'f1': float(f1[i])})
        
        return tuple(items)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'F1': self.MacroF1,
            'Recall': self.MacroRecall,
            'Precision': self.MacroPrecision,
            'Accuracy': self.Accuracy,
            'tn': self.Counts.TN,
            'per_class': list(self.PerClass)}
    
    
    def ToText(self):
        """
        Creates human-readable table.
        
        Returns:
            str
                Formatted report.
        """
        
        lines = []
        
        # summary
        lines.append("%-12s %8s %8s %10s %9s" % ("", "F1", "Recall", "Precision", "Accuracy"))
        lines.append("%-12s %8.4f %8.4f %10.4f %9.4f" % ("macro", self.MacroF1, self.MacroRecall, self.MacroPrecision, self.Accuracy))
        
        # classes
        for item in self.PerClass:
            lines.append("%-12s %8.4f %8.4f %10.4f %9s   TP=%d FP=%d FN=%d" % (
                item['class'][:12], item['f1'], item['recall'], item['precision'], "",
                item['tp'], item['fp'], item['fn']))
        
        lines.append("cell TN=%d, empty ratios count as 0" % self.Counts.TN)
        
        return "\n".join(lines)
    
    
    def Save(self, path):
        """
        Writes report as JSON document.
        
        Args:
            path: str
                Output file path.
        """
        
        with open(path, 'w', encoding='utf-8') as wf:
            json.dump(self.ToJSON(), wf, indent=4, ensure_ascii=False)


def evaluate_detections(detections, objects, grid_size, num_classes, cell_size=CELL_SIZE, tolerance=1.0, class_names=None):
    """
    Aggregates counts of externally produced detections over many images.
    
    Args:
        detections: ((pyfomo.Detection,),)
            Detections per image.
        
        objects: (((int, float, float),),)
            Ground-truth objects per image as (class_id, x, y).
        
        grid_size: int
            Number of cells along each side.
        
        num_classes: int
            Number of foreground classes.
        
        cell_size: int
            Cell size in pixels.
        
        tolerance: float
            Matching distance in cell widths.
        
        class_names: (str,) or None
            Foreground class names.
    
    Returns:
        pyfomo.MetricsReport
            Evaluation report.
    """
    
    if len(detections) != len(objects):
        message = "Detections do not match images! --> '%d' vs '%d'" % (len(detections), len(objects))
        raise ConfigError(message)
    
    if not objects:
        message = "Dataset is empty!"
        raise ConfigError(message)
    
    counts = ConfusionCounts(num_classes)
    
    for dets, objs in zip(detections, objects):
        counts.Add(match_detections(dets, objs, tolerance, cell_size, grid_size, num_classes))
    
    return MetricsReport(counts, class_names)


def evaluate(model, dataset, tau=0.5, tolerance=1.0, batch_size=32):
    """
    Runs detection over dataset and evaluates it against ground truth.
    
    Args:
        model: pyfomo.FomoModel
            Model to evaluate.
        
        dataset: pyfomo.Dataset
            Images at model input size with ground-truth objects.
        
        tau: float
            Probability threshold.
        
        tolerance: float
            Matching distance in cell widths.
        
        batch_size: int
            Number of images run at once.
    
    Returns:
        pyfomo.MetricsReport
            Evaluation report.
    """
    
    if len(dataset) == 0:
        message = "Dataset is empty!"
        raise ConfigError(message)
    
    if dataset.NumClasses != model.Config.NumClasses:
        message = "Dataset classes do not match model! --> '%d' vs '%d'" % (dataset.NumClasses, model.Config.NumClasses)
        raise ConfigError(message)
    
    # run detector
    detections = []
    for start in range(0, len(dataset), batch_size):
        detections.extend(detect_batch(model, dataset.Images[start:start+batch_size], tau))
    
    return evaluate_detections(
        detections = detections,
        objects = dataset.Objects,
        grid_size = model.Config.GridSize,
        num_classes = model.Config.NumClasses,
        cell_size = model.Config.CellSize,
        tolerance = tolerance,
        class_names = dataset.ClassNames)
