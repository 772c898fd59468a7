import math
import unittest
import numpy
import numpy.testing as npt
import pyfomo
from pyfomo.train import TrainingNetwork, TargetGrid, Adam, BN_EPSILON
from pyfomo.train import rasterize_targets, per_cell_loss, cell_loss, split_validation, gradients
from pyfomo.train import split_dataset
from pyfomo.dataio import synthetic_dataset


class TestCase(unittest.TestCase):
    """Test case for training."""
    
    
    def setUp(self):
        """Prepare test case data."""
        
        rng = numpy.random.default_rng(5)
        
        self.model = pyfomo.build_fomo(pyfomo.ModelConfig(32, 2), seed=3)
        self.images = rng.random((2, 32, 32, 3))
        self.labels = numpy.zeros((2, 4, 4), dtype=numpy.int64)
        self.labels[0, 1, 2] = 1
        self.labels[0, 3, 0] = 2
        self.labels[1, 2, 2] = 1
    
    
    def test_rasterize_targets(self):
        """Tests whether rasterize_targets works correctly."""
        
        grid = rasterize_targets([(1, 10.0, 20.0), (2, 31.9, 0.0)], 32)
        
        expected = numpy.zeros((4, 4), dtype=numpy.int64)
        expected[2, 1] = 1
        expected[0, 3] = 2
        npt.assert_array_equal(grid.Cells, expected)
        self.assertEqual(grid.PositiveCount, 2)
        npt.assert_array_equal(grid.Flipped().Cells, expected[:, ::-1])
        
        # objects sharing cell
        grid = rasterize_targets([(1, 1.0, 1.0), (1, 7.0, 7.0)], 32)
        self.assertEqual(grid.PositiveCount, 1)
        
        with self.assertRaises(pyfomo.ConfigError):
            rasterize_targets([(3, 1.0, 1.0)], 32, num_classes=2)
        
        with self.assertRaises(pyfomo.ConfigError):
            rasterize_targets([(1, 32.0, 1.0)], 32)
    
    
    def test_per_cell_loss(self):
        """Tests whether per_cell_loss works correctly."""
        
        target = rasterize_targets([(1, 4.0, 4.0)], 16)
        logits = pyfomo.Tensor(numpy.zeros((1, 2, 2, 2)))
        
        expected = (1.0 + 3 * 0.1) * math.log(2) / 4
        self.assertAlmostEqual(per_cell_loss(logits, target), expected, places=12)
        self.assertAlmostEqual(per_cell_loss(logits, target, 1.0), math.log(2), places=12)
        
        # confident correct prediction
        data = numpy.zeros((1, 2, 2, 2))
        data[..., 0] = 50
        data[0, 0, 0] = [0, 50]
        self.assertLess(per_cell_loss(pyfomo.Tensor(data), target), 1e-12)
        self.assertGreaterEqual(per_cell_loss(pyfomo.Tensor(data), target), 0.0)
    
    
    def test_cell_loss_gradient(self):
        """Tests whether cell_loss gradient works correctly."""
        
        rng = numpy.random.default_rng(1)
        logits = rng.normal(size=(2, 3, 3, 3))
        labels = rng.integers(0, 3, size=(2, 3, 3))
        
        loss, grad = cell_loss(logits, labels, 0.1)
        
        h = 1e-6
        for idx in numpy.ndindex(*logits.shape):
            
            plus = logits.copy()
            plus[idx] += h
            minus = logits.copy()
            minus[idx] -= h
            
            numeric = (cell_loss(plus, labels, 0.1, False)[0] - cell_loss(minus, labels, 0.1, False)[0]) / (2 * h)
            self.assertAlmostEqual(grad[idx], numeric, places=7)
    
    
    def test_network_gradients(self):
        """Tests whether TrainingNetwork gradients work correctly."""
        
        network = TrainingNetwork(self.model)
        loss, grads = network.Gradients(self.images, self.labels, 0.1)
        
        names = [
            "stem/weights", "block1_expand/weights", "block1_dw/weights", "block3_project/weights",
            "head/weights", "head/bias", "stem/gamma", "block2_dw/beta", "block3_expand/gamma"]
        
        h = 1e-6
        for name in names:
            
            param = network.Params[name]
            analytic = grads[name]
            self.assertEqual(analytic.shape, param.shape)
            
            # check strongest entries
            flat = numpy.argsort(-numpy.abs(analytic).reshape(-1))[:20]
            
            for i in flat:
                
                idx = numpy.unravel_index(i, param.shape)
                value = param[idx]
                
                param[idx] = value + h
                plus = network.Loss(self.images, self.labels, 0.1)
                param[idx] = value - h
                minus = network.Loss(self.images, self.labels, 0.1)
                param[idx] = value
                
                numeric = (plus - minus) / (2 * h)
                error = abs(analytic[idx] - numeric) / max(abs(analytic[idx]) + abs(numeric), 1e-8)
                self.assertLess(error, 1e-3, "%s %s" % (name, idx))
    
    
    def test_gradients_batch_mean(self):
        """Tests whether gradients average over batch correctly."""
        
        config = pyfomo.TrainConfig()
        targets = [TargetGrid(x) for x in self.labels]
        
        single = gradients(self.model, self.images, targets, config)
        tiled = gradients(self.model, numpy.concatenate([self.images, self.images]), targets + targets, config)
        
        for name in single:
            npt.assert_allclose(tiled[name], single[name], rtol=1e-7, atol=1e-12)
        
        with self.assertRaises(pyfomo.ConfigError):
            gradients(self.model, self.images[:0], [], config)
    
    
    def test_export(self):
        """Tests whether batch norm folding works correctly."""
        
        rng = numpy.random.default_rng(2)
        network = TrainingNetwork(self.model)
        
        network.Params["stem/gamma"][:] = rng.uniform(0.5, 1.5, 16)
        network.Params["stem/beta"][:] = rng.normal(size=16)
        network.State["stem/mean"] = rng.normal(size=16)
        network.State["stem/var"] = rng.uniform(0.5, 2.0, size=16)
        
        exported = network.Export()
        self.assertEqual(exported.FormatTag, pyfomo.F32)
        
        # compare stem output with inference-mode normalization
        stem = self.model.GetLayer("stem")
        y = pyfomo.conv2d(pyfomo.Tensor(self.images), pyfomo.Tensor(stem.Weights), stem.Bias, 2).Array.astype(numpy.float64)
        
        expected = (y - network.State["stem/mean"]) / numpy.sqrt(network.State["stem/var"] + BN_EPSILON)
        expected = expected * network.Params["stem/gamma"] + network.Params["stem/beta"]
        
        trace = exported.Trace(self.images.astype(numpy.float32))
        npt.assert_allclose(trace["stem"], expected, atol=1e-4)
        
        # head is copied
        npt.assert_allclose(exported.GetLayer("head").Weights, self.model.GetLayer("head").Weights)
    
    
    def test_running_stats(self):
        """Tests whether running statistics update works correctly."""
        
        network = TrainingNetwork(self.model)
        network.Gradients(self.images, self.labels, 0.1, update_state=True)
        
        self.assertNotIn("head/mean", network.State)
        
        stem = self.model.GetLayer("stem")
        y = pyfomo.conv2d(pyfomo.Tensor(self.images), pyfomo.Tensor(stem.Weights), stem.Bias, 2).Array.astype(numpy.float64)
        count = y.shape[0] * y.shape[1] * y.shape[2]
        
        npt.assert_allclose(network.State["stem/mean"], 0.1 * y.mean(axis=(0, 1, 2)), atol=1e-5)
        npt.assert_allclose(network.State["stem/var"], 0.9 + 0.1 * y.var(axis=(0, 1, 2)) * count / (count - 1), atol=1e-5)
    
    
    def test_adam(self):
        """Tests whether Adam works correctly."""
        
        params = {'w': numpy.array([1.0, -2.0, 3.0])}
        optimizer = Adam(params, 0.1)
        
        optimizer.Step(params, {'w': numpy.array([0.5, -4.0, 0.0])})
        npt.assert_allclose(params['w'], [0.9, -1.9, 3.0], atol=1e-6)
        self.assertEqual(optimizer.StepCount, 1)
    
    
    def test_split_validation(self):
        """Tests whether split_validation works correctly."""
        
        train, val = split_validation(100, 0.2, 42)
        self.assertEqual(len(val), 20)
        self.assertEqual(len(set(train) | set(val)), 100)
        self.assertEqual(len(set(train) & set(val)), 0)
        npt.assert_array_equal(val, split_validation(100, 0.2, 42)[1])
        
        train, val = split_validation(1, 0.2, 42)
        self.assertEqual((len(train), len(val)), (1, 0))
        
        train, val = split_validation(10, 0.0, 42)
        self.assertEqual(len(val), 0)
    
    
    def test_split_dataset(self):
        """Tests whether split_dataset works correctly."""
        
        dataset = synthetic_dataset(pyfomo.SynthConfig(image_size=32, image_count=10, seed=8))
        
        config = pyfomo.TrainConfig(train_fraction=0.8, seed=4)
        train, test = split_dataset(dataset, config)
        self.assertEqual((len(train), len(test)), (8, 2))
        self.assertEqual(set(train.Names) & set(test.Names), set())
        self.assertEqual(set(train.Names) | set(test.Names), set(dataset.Names))
        self.assertEqual(split_dataset(dataset, config)[1].Names, test.Names)
        
        # keep everything
        config = pyfomo.TrainConfig(train_fraction=1.0)
        train, test = split_dataset(dataset, config)
        self.assertEqual((len(train), len(test)), (10, 0))
    
    
    def test_config(self):
        """Tests whether TrainConfig works correctly."""
        
        config = pyfomo.TrainConfig.FromPreset('shipwreck')
        self.assertEqual(config.LearningRate, 0.0005)
        self.assertEqual(config.BatchSize, 16)
        self.assertAlmostEqual(config.TrainFraction, 88 / 111)
        
        config = pyfomo.TrainConfig.FromPreset('rover', epochs=5)
        self.assertEqual(config.Epochs, 5)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.TrainConfig.FromPreset('mars')
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.TrainConfig(background_weight=0.0)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.TrainConfig(epochs=0)
    
    
    def test_train(self):
        """Tests whether train works correctly."""
        
        synth = pyfomo.SynthConfig(image_size=32, image_count=16, objects_range=(1, 2), seed=4)
        dataset = pyfomo.dataio.synthetic_dataset(synth)
        config = pyfomo.TrainConfig(learning_rate=0.005, batch_size=4, epochs=8, seed=4)
        
        model = pyfomo.build_fomo(pyfomo.ModelConfig(32, 1), seed=4)
        trained, history = pyfomo.train(model, dataset, config)
        
        self.assertEqual(len(history), 8)
        self.assertTrue(all(math.isfinite(x) for x in history.Losses))
        self.assertLess(history.Losses[-1], history.Losses[0])
        self.assertTrue(all(x is not None for x in history.ValidationF1))
        self.assertEqual(history.ValidationF1[history.BestEpoch], max(history.ValidationF1))
        self.assertEqual(history.BestEpoch, history.ValidationF1.index(max(history.ValidationF1)))
        self.assertEqual(trained.FormatTag, pyfomo.F32)
        
        # deterministic
        again, _ = pyfomo.train(model, dataset, config)
        self.assertEqual(pyfomo.model.dump_model(again), pyfomo.model.dump_model(trained))
        
        # class mismatch
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.train(pyfomo.build_fomo(pyfomo.ModelConfig(32, 2), seed=4), dataset, config)
        
        with self.assertRaises(pyfomo.ShapeError):
            pyfomo.train(pyfomo.build_fomo(pyfomo.ModelConfig(64, 1), seed=4), dataset, config)


# run test case
if __name__ == "__main__":
    unittest.main(verbosity=2)
