import json
import os
import tempfile
import unittest
import numpy
import pyfomo
from pyfomo.metrics import per_class_precision, per_class_recall, per_class_f1


def scalar_f1(tp, fp, fn):
    """Recalculates macro scores by plain loops."""
    
    precisions = []
    recalls = []
    scores = []
    
    for t, f, n in zip(tp, fp, fn):
        p = t / (t + f) if t + f else 0.0
        r = t / (t + n) if t + n else 0.0
        precisions.append(p)
        recalls.append(r)
        scores.append(2 * p * r / (p + r) if p + r else 0.0)
    
    size = len(scores)
    return sum(precisions) / size, sum(recalls) / size, sum(scores) / size


class TestCase(unittest.TestCase):
    """Test case for metrics formulas."""
    
    
    def test_formulas(self):
        """Tests whether macro metrics work correctly."""
        
        rng = numpy.random.default_rng(7)
        
        for i in range(1000):
            
            k = int(rng.integers(1, 6))
            tp = rng.integers(0, 20, k).tolist()
            fp = rng.integers(0, 20, k).tolist()
            fn = rng.integers(0, 20, k).tolist()
            tn = int(rng.integers(0, 100))
            
            counts = pyfomo.ConfusionCounts(k, tp, fp, fn, tn)
            precision, recall, f1 = scalar_f1(tp, fp, fn)
            
            self.assertAlmostEqual(pyfomo.macro_precision(counts), precision, places=12)
            self.assertAlmostEqual(pyfomo.macro_recall(counts), recall, places=12)
            self.assertAlmostEqual(pyfomo.macro_f1(counts), f1, places=12)
            
            total = sum(tp) + sum(fp) + sum(fn) + tn
            if total:
                self.assertAlmostEqual(pyfomo.accuracy(counts), (sum(tp) + tn) / total, places=12)
    
    
    def test_fixtures(self):
        """Tests whether metrics match hand calculated values."""
        
        counts = pyfomo.ConfusionCounts(2, tp=(3, 0), fp=(1, 0), fn=(1, 2), tn=10)
        
        self.assertEqual(per_class_precision(counts).tolist(), [0.75, 0.0])
        self.assertEqual(per_class_recall(counts).tolist(), [0.75, 0.0])
        self.assertEqual(per_class_f1(counts).tolist(), [0.75, 0.0])
        self.assertAlmostEqual(pyfomo.macro_f1(counts), 0.375)
        self.assertAlmostEqual(pyfomo.accuracy(counts), 13 / 17)
        
        # perfect
        counts = pyfomo.ConfusionCounts(1, tp=(4,), tn=60)
        self.assertEqual(pyfomo.macro_f1(counts), 1.0)
        self.assertEqual(pyfomo.accuracy(counts), 1.0)
        
        # empty
        counts = pyfomo.ConfusionCounts(1)
        self.assertEqual(pyfomo.macro_f1(counts), 0.0)
        
        with self.assertRaises(pyfomo.UndefinedMetricError):
            pyfomo.accuracy(counts)
    
    
    def test_counts(self):
        """Tests whether ConfusionCounts works correctly."""
        
        counts = pyfomo.ConfusionCounts(2, tp=(1, 2), tn=5)
        counts.Add(pyfomo.ConfusionCounts(2, fp=(3, 0), fn=(0, 1), tn=2))
        
        self.assertEqual(counts.ToJSON(), {'tp': [1, 2], 'fp': [3, 0], 'fn': [0, 1], 'tn': 7})
        
        with self.assertRaises(pyfomo.ConfigError):
            counts.Add(pyfomo.ConfusionCounts(1))
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.ConfusionCounts(0)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.ConfusionCounts(2, tp=(1,))
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.ConfusionCounts(1, fp=(-1,))
    
    
    def test_matching(self):
        """Tests whether match_detections works correctly."""
        
        objects = ((1, 12.0, 12.0), (1, 40.0, 40.0), (2, 20.0, 4.0))
        detections = (
            pyfomo.Detection(1, 0.9, 14.0, 12.0),
            pyfomo.Detection(1, 0.8, 13.0, 13.0),
            pyfomo.Detection(2, 0.7, 20.0, 4.0),
            pyfomo.Detection(1, 0.6, 60.0, 60.0))
        
        counts = pyfomo.match_detections(detections, objects, grid_size=8, num_classes=2)
        
        # second detection finds object taken
        self.assertEqual(counts.TP.tolist(), [1, 1])
        self.assertEqual(counts.FP.tolist(), [2, 0])
        self.assertEqual(counts.FN.tolist(), [1, 0])
        
        # cells (1,1), (5,5), (0,2) and (7,7) occupied
        self.assertEqual(counts.TN, 64 - 4)
        
        # tolerance
        far = (pyfomo.Detection(1, 0.9, 22.0, 12.0),)
        self.assertEqual(pyfomo.match_detections(far, objects[:1]).TP.tolist(), [0])
        self.assertEqual(pyfomo.match_detections(far, objects[:1], tolerance_cells=1.5).TP.tolist(), [1])
        
        # class must agree
        other = (pyfomo.Detection(2, 0.9, 12.0, 12.0),)
        counts = pyfomo.match_detections(other, objects[:1])
        self.assertEqual(counts.TP.tolist(), [0, 0])
        self.assertEqual(counts.FN.tolist(), [1, 0])
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.match_detections(far, objects, tolerance_cells=0)
    
    
    def test_greedy(self):
        """Tests whether confident detections are matched first."""
        
        objects = ((1, 10.0, 10.0), (1, 18.0, 10.0))
        detections = (
            pyfomo.Detection(1, 0.5, 11.0, 10.0),
            pyfomo.Detection(1, 0.9, 12.0, 10.0))
        
        counts = pyfomo.match_detections(detections, objects)
        
        # confident one takes nearest, other falls to next
        self.assertEqual(counts.TP.tolist(), [2])
        self.assertEqual(counts.FP.tolist(), [0])
        self.assertEqual(counts.FN.tolist(), [0])
    
    
    def test_report(self):
        """Tests whether MetricsReport works correctly."""
        
        counts = pyfomo.ConfusionCounts(2, tp=(3, 1), fp=(1, 0), fn=(0, 1), tn=20)
        report = pyfomo.MetricsReport(counts, ("cup", "key"))
        
        data = report.ToJSON()
        self.assertEqual(set(data), {'F1', 'Recall', 'Precision', 'Accuracy', 'tn', 'per_class'})
        self.assertEqual([c['class'] for c in data['per_class']], ["cup", "key"])
        self.assertAlmostEqual(data['Precision'], (0.75 + 1.0) / 2)
        self.assertAlmostEqual(data['Recall'], (1.0 + 0.5) / 2)
        self.assertIn("macro", report.ToText())
        
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "metrics.json")
            report.Save(path)
            
            with open(path, 'r', encoding='utf-8') as rf:
                self.assertEqual(json.load(rf), data)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.MetricsReport(counts, ("cup",))
    
    
    def test_evaluate(self):
        """Tests whether evaluate_detections works correctly."""
        
        detections = ((pyfomo.Detection(1, 0.9, 12.0, 12.0),), ())
        objects = (((1, 12.0, 12.0),), ((1, 20.0, 20.0),))
        
        report = pyfomo.evaluate_detections(detections, objects, grid_size=4, num_classes=1)
        
        self.assertEqual(report.Counts.TP.tolist(), [1])
        self.assertEqual(report.Counts.FN.tolist(), [1])
        self.assertEqual(report.Counts.TN, 15 + 15)
        self.assertAlmostEqual(report.MacroRecall, 0.5)
        self.assertAlmostEqual(report.MacroPrecision, 1.0)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.evaluate_detections(detections[:1], objects, grid_size=4, num_classes=1)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.evaluate_detections((), (), grid_size=4, num_classes=1)


# run test case
if __name__ == "__main__":
    unittest.main(verbosity=2)
