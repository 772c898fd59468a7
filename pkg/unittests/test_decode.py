import os
import tempfile
import unittest
import numpy
import pyfomo
from pyfomo.decode import detect_batch, write_detections, read_detections


def make_heatmap(foreground, grid=4):
    """Creates single-class heatmap from {(row, col): prob}."""
    
    probs = numpy.zeros((1, grid, grid, 2))
    probs[..., 0] = 1.0
    
    for (row, col), prob in foreground.items():
        probs[0, row, col] = (1 - prob, prob)
    
    return pyfomo.GridHeatmap(probs)


class TestCase(unittest.TestCase):
    """Test case for heatmap decoding."""
    
    
    def test_single_cell(self):
        """Tests whether decode_heatmap works correctly."""
        
        detections = pyfomo.decode_heatmap(make_heatmap({(1, 2): 0.9}))
        
        self.assertEqual(len(detections), 1)
        det = detections[0]
        self.assertEqual(det.ClassId, 1)
        self.assertAlmostEqual(det.Confidence, 0.9, places=6)
        self.assertEqual((det.X, det.Y), (20.0, 12.0))
        self.assertEqual(det.CellCount, 1)
        
        self.assertEqual(pyfomo.decode_heatmap(make_heatmap({})), ())
    
    
    def test_merge(self):
        """Tests whether merge_and_centroid works correctly."""
        
        # diagonal neighbors merge
        detections = pyfomo.decode_heatmap(make_heatmap({(1, 1): 0.9, (2, 2): 0.6}))
        
        self.assertEqual(len(detections), 1)
        self.assertEqual(detections[0].CellCount, 2)
        self.assertAlmostEqual(detections[0].X, 15.2, places=5)
        self.assertAlmostEqual(detections[0].Y, 15.2, places=5)
        self.assertAlmostEqual(detections[0].Confidence, 0.9, places=6)
        
        # separated cells stay apart
        detections = pyfomo.decode_heatmap(make_heatmap({(0, 0): 0.7, (0, 2): 0.8}))
        self.assertEqual(len(detections), 2)
        self.assertEqual([d.X for d in detections], [20.0, 4.0])
        
        # classes do not merge
        cells = ((0, 0, 1, 0.9), (0, 1, 2, 0.8))
        detections = pyfomo.merge_and_centroid(cells)
        self.assertEqual(sorted(d.ClassId for d in detections), [1, 2])
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.merge_and_centroid(((0, 0, 1, 0.9), (0, 0, 2, 0.8)))
        
        with self.assertRaises(pyfomo.ShapeError):
            pyfomo.merge_and_centroid(((4, 0, 1, 0.9),), image_size=32)
    
    
    def test_order(self):
        """Tests whether detections are sorted correctly."""
        
        cells = ((3, 3, 1, 0.7), (0, 3, 1, 0.7), (0, 0, 1, 0.7), (2, 0, 1, 0.9))
        detections = pyfomo.merge_and_centroid(cells)
        
        positions = [(d.Y, d.X) for d in detections]
        self.assertEqual(positions, [(20.0, 4.0), (4.0, 4.0), (4.0, 28.0), (28.0, 28.0)])
    
    
    def test_threshold(self):
        """Tests whether threshold_cells works correctly."""
        
        # ties resolve to background
        self.assertEqual(pyfomo.threshold_cells(make_heatmap({(0, 0): 0.5})), ())
        
        # threshold is inclusive
        cells = pyfomo.threshold_cells(make_heatmap({(0, 0): 0.75}), tau=0.75)
        self.assertEqual(len(cells), 1)
        self.assertEqual(cells[0][:3], (0, 0, 1))
        
        # below threshold
        self.assertEqual(pyfomo.threshold_cells(make_heatmap({(0, 0): 0.6}), tau=0.7), ())
        
        # argmax must be foreground
        probs = numpy.zeros((1, 2, 2, 3))
        probs[..., 0] = 1.0
        probs[0, 0, 0] = (0.4, 0.35, 0.25)
        probs[0, 1, 1] = (0.2, 0.4, 0.4)
        cells = pyfomo.threshold_cells(pyfomo.GridHeatmap(probs), tau=0.3)
        self.assertEqual([c[:3] for c in cells], [(1, 1, 1)])
        
        for tau in (0.0, 1.0, -0.5):
            with self.assertRaises(pyfomo.ConfigError):
                pyfomo.threshold_cells(make_heatmap({}), tau)
    
    
    def test_detection(self):
        """Tests whether Detection works correctly."""
        
        det = pyfomo.Detection(1, 0.8, 10.0, 12.0, 2, ((1, 1, 0.8), (1, 2, 0.6)))
        self.assertEqual(det, pyfomo.Detection(1, 0.8, 10.0, 12.0, 2))
        self.assertEqual(len(det.Cells), 2)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.Detection(0, 0.8, 1.0, 1.0)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.Detection(1, 0.0, 1.0, 1.0)
        
        with self.assertRaises(AttributeError):
            det.X = 0.0
    
    
    def test_detect(self):
        """Tests whether detect works correctly."""
        
        rng = numpy.random.default_rng(2)
        images = rng.random((3, 32, 32, 3)).astype(numpy.float32)
        
        # uniform output
        model = pyfomo.build_fomo(pyfomo.ModelConfig(32, 1), seed=2, zero_head=True)
        self.assertEqual(pyfomo.detect(model, pyfomo.Tensor(images[:1])), ())
        
        # batch matches single
        model = pyfomo.build_fomo(pyfomo.ModelConfig(32, 1), seed=2)
        batch = detect_batch(model, images, tau=0.3)
        self.assertEqual(len(batch), 3)
        
        for i in range(3):
            single = pyfomo.detect(model, pyfomo.Tensor(images[i:i+1]), tau=0.3)
            self.assertEqual([(d.ClassId, d.CellCount) for d in single], [(d.ClassId, d.CellCount) for d in batch[i]])
    
    
    def test_log(self):
        """Tests whether detections log works correctly."""
        
        records = [
            ("img_00000.ppm", pyfomo.Detection(1, 0.8125, 10.5, 12.25, 2)),
            ("img_00001.ppm", pyfomo.Detection(2, 0.5, 3.0, 4.0, 1))]
        
        with tempfile.TemporaryDirectory() as tmp:
            
            path = os.path.join(tmp, "detections.tsv")
            write_detections(path, records)
            self.assertEqual(list(read_detections(path)), records)
            
            with open(path, 'w', encoding='utf-8') as wf:
                wf.write("image\tclass\n")
            
            with self.assertRaises(pyfomo.ManifestError):
                read_detections(path)
            
            with self.assertRaises(IOError):
                read_detections(os.path.join(tmp, "missing.tsv"))


# run test case
if __name__ == "__main__":
    unittest.main(verbosity=2)
