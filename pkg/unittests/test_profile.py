import unittest
import numpy
import pyfomo
from pyfomo.profile import MIN_REPEATS, profile_table


def make_model(size, quantized=False):
    """Creates model of given input size."""
    
    model = pyfomo.build_fomo(pyfomo.ModelConfig(size, 1), seed=3)
    
    if quantized:
        rng = numpy.random.default_rng(3)
        images = rng.random((4, size, size, 3)).astype(numpy.float32)
        model = pyfomo.quantize_model(model, pyfomo.calibrate(model, images))
    
    return model


class TestCase(unittest.TestCase):
    """Test case for memory and latency profiling."""
    
    
    def test_macs(self):
        """Tests whether count_macs works correctly."""
        
        self.assertEqual(pyfomo.count_macs(make_model(32)), 715520)
        self.assertEqual(pyfomo.count_macs(make_model(64)), 4 * 715520)
        self.assertEqual(pyfomo.count_macs(make_model(96)), 9 * 715520)
        self.assertEqual(pyfomo.count_macs(make_model(32, True)), 715520)
    
    
    def test_memory(self):
        """Tests whether plan_memory works correctly."""
        
        plans = {s: pyfomo.plan_memory(make_model(s)) for s in (32, 64, 96)}
        
        # expanded block1 in and out
        self.assertEqual(plans[32].PeakBytes, 2 * 16 * 16 * 96 * 4)
        self.assertEqual(plans[32].ItemSize, 4)
        
        # input size ordering
        self.assertLess(plans[32].PeakBytes, plans[64].PeakBytes)
        self.assertLess(plans[64].PeakBytes, plans[96].PeakBytes)
        
        # peak within arena
        for plan in plans.values():
            self.assertEqual(plan.PeakBytes, max(l.LiveBytes for l in plan.Layers))
            self.assertLessEqual(plan.PeakBytes, plan.ArenaBytes)
    
    
    def test_memory_int8(self):
        """Tests whether quantized memory plan works correctly."""
        
        plan_f32 = pyfomo.plan_memory(make_model(32))
        plan_int8 = pyfomo.plan_memory(make_model(32, True))
        
        self.assertEqual(plan_int8.ItemSize, 1)
        self.assertEqual(plan_int8.PeakBytes * 4, plan_f32.PeakBytes)
        self.assertLess(plan_int8.WeightBytes, plan_f32.WeightBytes)
    
    
    def test_buffers(self):
        """Tests whether plan_buffers works correctly."""
        
        plan = pyfomo.plan_memory(make_model(32))
        records = {r.Name: r for r in plan.Layers}
        
        self.assertEqual(records["stem"].InputBytes, 32 * 32 * 3 * 4)
        self.assertEqual(records["stem"].OutputBytes, 16 * 16 * 16 * 4)
        self.assertEqual(records["head"].OutputBytes, 4 * 4 * 2 * 4)
        
        # skip source stays live until consumed
        self.assertIn("block2_project", records["block3_dw"].Buffers)
        self.assertNotIn("block2_project", records["head"].Buffers)
        
        # live buffers do not overlap
        for record in plan.Layers:
            spans = sorted(record.Buffers.values())
            for (o1, s1), (o2, s2) in zip(spans, spans[1:]):
                self.assertLessEqual(o1 + s1, o2)
        
        text = plan.ToText()
        self.assertIn("block1_expand", text)
        self.assertIn("peak %d B" % plan.PeakBytes, text)
    
    
    def test_latency(self):
        """Tests whether bench_latency works correctly."""
        
        model = make_model(32)
        report = pyfomo.bench_latency(model, repeats=MIN_REPEATS, throughput=1e6, warmup=1)
        
        self.assertEqual(report.Repeats, MIN_REPEATS)
        self.assertTrue(all(x > 0 for x in report.Samples))
        self.assertLessEqual(report.Median, report.P95)
        self.assertEqual(report.MacCount, 715520)
        self.assertAlmostEqual(report.McuProjectionMs, 715.52)
        self.assertEqual(report.ToJSON()['repeats'], MIN_REPEATS)
        
        table = profile_table([(model, pyfomo.plan_memory(model), report), (model, pyfomo.plan_memory(model), None)])
        self.assertEqual(len(table.split("\n")), 3)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.bench_latency(model, repeats=MIN_REPEATS - 1)
        
        with self.assertRaises(pyfomo.ConfigError):
            pyfomo.bench_latency(model, repeats=MIN_REPEATS, throughput=0)


# run test case
if __name__ == "__main__":
    unittest.main(verbosity=2)
