import os
import tempfile
import unittest
import numpy
import pyfomo
from pyfomo.quant import calibration_subset
from pyfomo.sim import run_episode
from pyfomo.sim.corridor import ROI_RADIUS

# define run options
ENABLED = os.environ.get("PYFOMO_ACCEPTANCE") == "1"
EPOCHS = 50
LEARNING_RATE = 5e-4
BATCH_SIZE = 16
LATENCY_SLACK = 1.5


def make_split(contrast, seed=42):
    """Generates 120 training and 30 test images."""
    
    config = pyfomo.SynthConfig(image_size=64, image_count=150, contrast=contrast, seed=seed)
    dataset = pyfomo.dataio.synthetic_dataset(config)
    
    return dataset.Subset(range(120)), dataset.Subset(range(120, 150))


def train_model(dataset, seed=42, epochs=EPOCHS):
    """Trains 64x64 model with acceptance budget."""
    
    config = pyfomo.TrainConfig(learning_rate=LEARNING_RATE, batch_size=BATCH_SIZE, epochs=epochs, seed=seed)
    model = pyfomo.build_fomo(pyfomo.ModelConfig(dataset.InputSize, dataset.NumClasses), seed)
    
    return pyfomo.train(model, dataset, config)[0]


def make_roi_set(size, count=120, seed=42):
    """Generates single-object images sized like corridor RoIs."""
    
    radius = (ROI_RADIUS[0] * size, ROI_RADIUS[1] * size)
    config = pyfomo.SynthConfig(image_size=size, image_count=count, objects_range=(1, 1), radius_range=radius, seed=seed)
    
    return pyfomo.dataio.synthetic_dataset(config)


def quantize(model, dataset, seed=42):
    """Quantizes model on calibration subset."""
    
    indices = calibration_subset(len(dataset), 32, seed)
    stats = pyfomo.calibrate(model, dataset.Images[indices])
    
    return pyfomo.quantize_model(model, stats)


@unittest.skipUnless(ENABLED, "set PYFOMO_ACCEPTANCE=1 to run long acceptance checks")
class TestCase(unittest.TestCase):
    """Test case for end-to-end acceptance runs."""
    
    
    @classmethod
    def setUpClass(cls):
        """Trains high-contrast model once."""
        
        cls.train_set, cls.test_set = make_split(0.9)
        cls.model = train_model(cls.train_set)
        cls.int8 = quantize(cls.model, cls.train_set)
        cls.report = pyfomo.evaluate(cls.model, cls.test_set)
    
    
    def test_f1(self):
        """Tests whether high-contrast training reaches F1 0.90."""
        
        self.assertGreaterEqual(self.report.MacroF1, 0.90)
    
    
    def test_contrast(self):
        """Tests whether low contrast lowers F1."""
        
        train_set, test_set = make_split(0.2)
        model = train_model(train_set)
        low = pyfomo.evaluate(model, test_set)
        
        self.assertGreaterEqual(self.report.MacroF1 - low.MacroF1, 0.15)
    
    
    def test_int8(self):
        """Tests whether int8 model matches real-valued model."""
        
        report = pyfomo.evaluate(self.int8, self.test_set)
        self.assertLessEqual(abs(report.MacroF1 - self.report.MacroF1), 0.05)
        
        # per-cell argmax agreement
        f32 = numpy.argmax(self.model.ForwardBatch(self.test_set.Images), axis=-1)
        int8 = numpy.argmax(self.int8.ForwardBatch(self.test_set.Images), axis=-1)
        self.assertGreaterEqual(numpy.mean(f32 == int8), 0.95)
        
        # round trip
        rng = numpy.random.default_rng(1)
        values = rng.uniform(-3, 5, (10, 100, 100, 1))
        params = pyfomo.quant.asymmetric_params(-3, 5)
        restored = pyfomo.QuantTensor(pyfomo.tensor.quantize_values(values, params), params).Dequantize()
        self.assertLessEqual(numpy.max(numpy.abs(restored - values)), params.Scale / 2 + 1e-9)
    
    
    def test_resources(self):
        """Tests whether memory and latency scale with input size."""
        
        rng = numpy.random.default_rng(2)
        peaks = {}
        latency = {}
        
        for size in pyfomo.INPUT_SIZES:
            
            model = pyfomo.build_fomo(pyfomo.ModelConfig(size, 1), seed=2)
            int8 = pyfomo.quantize_model(model, pyfomo.calibrate(model, rng.random((8, size, size, 3))))
            
            for tag, item in ((pyfomo.F32, model), (pyfomo.INT8, int8)):
                peaks[tag, size] = pyfomo.plan_memory(item).PeakBytes
                latency[tag, size] = pyfomo.bench_latency(item, repeats=30)
        
        for tag in pyfomo.MODEL_FORMAT:
            self.assertLess(peaks[tag, 32], peaks[tag, 64])
            self.assertLess(peaks[tag, 64], peaks[tag, 96])
            self.assertLess(latency[tag, 32].Median, latency[tag, 64].Median)
            self.assertLess(latency[tag, 64].Median, latency[tag, 96].Median)
        
        for size in pyfomo.INPUT_SIZES:
            self.assertLess(peaks[pyfomo.INT8, size], peaks[pyfomo.F32, size])
            
            # host int8 kernels emulate integer math on float arrays
            self.assertLessEqual(latency[pyfomo.INT8, size].Median, LATENCY_SLACK * latency[pyfomo.F32, size].Median)
        
        # near real time
        for size in (32, 64):
            report = latency[pyfomo.INT8, size]
            self.assertLess(report.Median, 100.0)
            self.assertTrue(100.0 <= report.McuProjectionMs < 1000.0)
    
    
    def test_simulator(self):
        """Tests whether emphasis gets more close-up frames."""
        
        corridor = pyfomo.make_corridor(height=64, length=640, n_rois=3, contrast=0.9, seed=42)
        model = train_model(make_roi_set(64))
        params = pyfomo.EmphasisParams()
        
        on = run_episode(corridor, model, ef_enabled=True)
        off = run_episode(corridor, model, ef_enabled=False)
        
        self.assertGreater(off.RoiFrames, 0)
        self.assertGreater(on.RoiFrames, 0)
        self.assertGreaterEqual(on.RoiFrames, 1.5 * off.RoiFrames)
        
        for dwell in on.Dwell:
            self.assertGreaterEqual(dwell, params.DwellFrames)
        
        # empty corridor
        corridor = pyfomo.make_corridor(height=64, length=640, n_rois=0, seed=42)
        
        on = run_episode(corridor, self.model, ef_enabled=True)
        off = run_episode(corridor, self.model, ef_enabled=False)
        self.assertEqual(on.Trajectory, off.Trajectory)
    
    
    def test_determinism(self):
        """Tests whether reruns are bit-identical."""
        
        config = pyfomo.SynthConfig(image_size=32, image_count=16, seed=9)
        
        with tempfile.TemporaryDirectory() as tmp:
            
            outputs = []
            for run in range(2):
                
                folder = os.path.join(tmp, "run%d" % run)
                manifest = pyfomo.gen_synthetic(config, folder)
                dataset = pyfomo.load_dataset(manifest, 32)
                
                model = train_model(dataset, seed=9, epochs=3)
                path = os.path.join(folder, "model.lvtx")
                pyfomo.save_model(model, path)
                
                corridor = pyfomo.make_corridor(height=32, length=160, n_rois=1, radius_range=(4, 5), seed=9)
                sim = run_episode(corridor, model, seed=9, speed_jitter=0.1)
                
                with open(path, 'rb') as rf:
                    blob = rf.read()
                
                with open(os.path.join(folder, "manifest.json"), 'rb') as rf:
                    document = rf.read()
                
                outputs.append((blob, document, pyfomo.evaluate(model, dataset).ToJSON(), sim.ToJSON(), sim.Trajectory))
            
            self.assertEqual(outputs[0][0], outputs[1][0])
            self.assertEqual(outputs[0][2:], outputs[1][2:])
            
            # manifest does not store its location
            self.assertEqual(outputs[0][1], outputs[1][1])


# run test case
if __name__ == "__main__":
    unittest.main(verbosity=2)
