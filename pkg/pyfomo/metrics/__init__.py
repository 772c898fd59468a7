# import objects
from .counts import ConfusionCounts, match_detections
from .formulas import macro_precision, macro_recall, macro_f1, accuracy
from .formulas import per_class_precision, per_class_recall, per_class_f1
from .report import MetricsReport, evaluate, evaluate_detections
