import os
import tempfile
import unittest
import numpy
import numpy.testing as npt
import pyfomo
from pyfomo.quant import symmetric_params, asymmetric_params, quantize_tensor, merge_stats
from pyfomo.quant import calibration_subset, save_stats, load_stats
from pyfomo.model import dump_model, parse_model


class TestCase(unittest.TestCase):
    """Test case for post-training quantization."""
    
    
    def setUp(self):
        """Prepare test case data."""
        
        rng = numpy.random.default_rng(8)
        
        self.model = pyfomo.build_fomo(pyfomo.ModelConfig(32, 1), seed=8)
        self.images = rng.random((12, 32, 32, 3)).astype(numpy.float32)
        self.stats = pyfomo.calibrate(self.model, self.images, batch_size=5)
    
    
    def test_params(self):
        """Tests whether quantization params work correctly."""
        
        self.assertEqual(asymmetric_params(0.0, 1.0), pyfomo.QuantParams(1.0 / 255, -128))
        self.assertEqual(asymmetric_params(2.0, 5.0), pyfomo.QuantParams(5.0 / 255, -128))
        self.assertEqual(asymmetric_params(-1.0, 3.0), pyfomo.QuantParams(4.0 / 255, -64))
        self.assertEqual(asymmetric_params(-4.0, -1.0), pyfomo.QuantParams(4.0 / 255, 127))
        self.assertEqual(asymmetric_params(0.0, 0.0), pyfomo.QuantParams(1.0, 0))
        
        self.assertEqual(symmetric_params([-2.0, 1.0]), pyfomo.QuantParams(2.0 / 127, 0))
        self.assertEqual(symmetric_params([0.0, 0.0]), pyfomo.QuantParams(1.0, 0))
    
    
    def test_round_trip(self):
        """Tests whether quantize_tensor and dequantize work correctly."""
        
        rng = numpy.random.default_rng(9)
        values = rng.uniform(-3.0, 5.0, size=(1, 10, 100, 100))
        
        for symmetric in (True, False):
            
            qtensor = quantize_tensor(values, symmetric)
            restored = pyfomo.dequantize(qtensor).Array
            
            error = numpy.abs(restored.astype(numpy.float64) - values)
            self.assertLessEqual(error.max(), qtensor.Scale / 2 + 1e-6)
        
        # zero is exact
        qtensor = quantize_tensor(numpy.array([[[[0.0, 0.3, 2.0]]]]), False)
        self.assertEqual(qtensor.Dequantize()[0, 0, 0, 0], 0.0)
        
        with self.assertRaises(ValueError):
            quantize_tensor(numpy.array([[[[numpy.inf]]]]), True)
    
    
    def test_calibrate(self):
        """Tests whether calibrate works correctly."""
        
        self.assertEqual(self.stats.SampleCount, 12)
        self.assertIn(pyfomo.INPUT_TENSOR, self.stats)
        
        for layer in self.model.Layers:
            self.assertIn(layer.Name, self.stats)
            lo, hi = self.stats.Ranges[layer.Name]
            self.assertLessEqual(lo, 0.0)
            self.assertGreaterEqual(hi, 0.0)
        
        lo, hi = self.stats.Ranges["stem_relu6"]
        self.assertEqual(lo, 0.0)
        self.assertLessEqual(hi, 6.0)
        
        # merge halves
        first = pyfomo.calibrate(self.model, self.images[:6])
        second = pyfomo.calibrate(self.model, self.images[6:])
        merged = merge_stats(first, second)
        
        self.assertEqual(merged.SampleCount, 12)
        for name, (lo, hi) in self.stats.Ranges.items():
            npt.assert_allclose(merged.Ranges[name], (lo, hi), atol=1e-5)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.calibrate(self.model, self.images[:0])
    
    
    def test_stats_io(self):
        """Tests whether stats files work correctly."""
        
        with tempfile.TemporaryDirectory() as tmp:
            
            path = os.path.join(tmp, "stats.json")
            save_stats(self.stats, path)
            self.assertEqual(load_stats(path), self.stats)
    
    
    def test_calibration_subset(self):
        """Tests whether calibration_subset works correctly."""
        
        subset = calibration_subset(100, 32, 42)
        self.assertEqual(len(subset), 32)
        self.assertEqual(len(set(subset)), 32)
        npt.assert_array_equal(subset, numpy.sort(subset))
        npt.assert_array_equal(subset, calibration_subset(100, 32, 42))
        
        self.assertEqual(len(calibration_subset(10, 32, 42)), 10)
        
        with self.assertRaises(pyfomo.ConfigError):
            calibration_subset(0)
    
    
    def test_quantize_model(self):
        """Tests whether quantize_model works correctly."""
        
        quantized = pyfomo.quantize_model(self.model, self.stats)
        
        self.assertEqual(quantized.FormatTag, pyfomo.INT8)
        self.assertTrue(quantized.IsQuantized)
        self.assertEqual(quantized.ParameterCount, self.model.ParameterCount)
        self.assertLess(quantized.WeightBytes, self.model.WeightBytes)
        
        for layer in quantized.Layers:
            self.assertIsNotNone(layer.OutputParams)
            if layer.Weights is not None:
                self.assertEqual(layer.Weights.dtype, numpy.int8)
                self.assertEqual(layer.Bias.dtype, numpy.int32)
                self.assertEqual(layer.WeightParams.ZeroPoint, 0)
        
        # outputs stay close to real-valued model
        expected = self.model.ForwardBatch(self.images)
        result = quantized.ForwardBatch(self.images)
        
        self.assertEqual(result.shape, expected.shape)
        self.assertLess(numpy.mean(numpy.abs(result - expected)), 0.05)
        
        # container
        data = dump_model(quantized)
        restored = parse_model(data)
        self.assertEqual(dump_model(restored), data)
        npt.assert_array_equal(restored.ForwardBatch(self.images), result)
        
        # errors
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.quantize_model(quantized, self.stats)
        
        ranges = dict(self.stats.Ranges)
        del ranges["block2_dw"]
        
        with self.assertRaises(pyfomo.CalibrationError):
            pyfomo.quantize_model(self.model, pyfomo.CalibrationStats(ranges))
        
        with self.assertRaises(KeyError):
            pyfomo.quantize_model(self.model, pyfomo.CalibrationStats(ranges))
    
    
    def test_input_params(self):
        """Tests whether input quantization works correctly."""
        
        quantized = pyfomo.quantize_model(self.model, self.stats)
        lo, hi = self.stats.Ranges[pyfomo.INPUT_TENSOR]
        
        self.assertEqual(quantized.InputParams, asymmetric_params(lo, hi))
        
        trace = quantized.Trace(self.images[:1])
        npt.assert_allclose(trace[pyfomo.INPUT_TENSOR], self.images[:1], atol=quantized.InputParams.Scale / 2 + 1e-6)


# run test case
if __name__ == "__main__":
    unittest.main(verbosity=2)
