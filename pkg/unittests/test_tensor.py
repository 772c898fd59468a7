import unittest
import numpy
import numpy.testing as npt
import pyfomo
from pyfomo.tensor import output_size, requantize, round_half_away, quantize_values, accumulator_bound
from pyfomo.tensor import conv2d_int8, depthwise_conv2d_int8, relu6_int8, add_int8


def naive_conv2d(x, w, b, stride, padding, depthwise=False):
    """Calculates convolution by plain nested loops."""
    
    n, h, wd, cin = x.shape
    kh, kw = w.shape[:2]
    cout = cin if depthwise else w.shape[3]
    
    if padding == pyfomo.SAME:
        oh, ow = -(-h // stride), -(-wd // stride)
        top = max((oh - 1) * stride + kh - h, 0) // 2
        left = max((ow - 1) * stride + kw - wd, 0) // 2
    else:
        oh, ow = (h - kh) // stride + 1, (wd - kw) // stride + 1
        top, left = 0, 0
    
    out = numpy.zeros((n, oh, ow, cout))
    for b_ in range(n):
        for r in range(oh):
            for c in range(ow):
                for o in range(cout):
                    acc = b[o]
                    for i in range(kh):
                        for j in range(kw):
                            y = r * stride + i - top
                            xx = c * stride + j - left
                            if not (0 <= y < h and 0 <= xx < wd):
                                continue
                            if depthwise:
                                acc += x[b_, y, xx, o] * w[i, j, o, 0]
                            else:
                                acc += numpy.dot(x[b_, y, xx, :], w[i, j, :, o])
                    out[b_, r, c, o] = acc
    
    return out


class TestCase(unittest.TestCase):
    """Test case for tensor kernels."""
    
    
    def test_tensor(self):
        """Tests whether Tensor works correctly."""
        
        tensor = pyfomo.Tensor(range(24), shape=(1, 2, 3, 4))
        self.assertEqual(tensor.Shape, (1, 2, 3, 4))
        self.assertEqual(tensor.Size, 24)
        self.assertEqual(tensor.Array.dtype, numpy.float32)
        self.assertEqual(tensor.Array[0, 1, 2, 3], 23)
        
        with self.assertRaises(pyfomo.ShapeError):
            pyfomo.Tensor(range(23), shape=(1, 2, 3, 4))
        
        with self.assertRaises(pyfomo.ShapeError):
            pyfomo.Tensor(numpy.zeros((2, 3)))
        
        with self.assertRaises(ValueError):
            pyfomo.Tensor(numpy.full((1, 1, 1, 1), numpy.nan))
        
        with self.assertRaises(AttributeError):
            tensor.Shape = (1,)
        
        with self.assertRaises(ValueError):
            tensor.Array[0, 0, 0, 0] = 1
    
    
    def test_output_size(self):
        """Tests whether output_size works correctly."""
        
        self.assertEqual(output_size(32, 3, 2, pyfomo.SAME), 16)
        self.assertEqual(output_size(33, 3, 2, pyfomo.SAME), 17)
        self.assertEqual(output_size(32, 3, 1, pyfomo.VALID), 30)
        self.assertEqual(output_size(5, 3, 2, pyfomo.VALID), 2)
        
        with self.assertRaises(pyfomo.ShapeError):
            output_size(2, 3, 1, pyfomo.VALID)
        
        with self.assertRaises(pyfomo.ConfigError):
            output_size(8, 3, 1, 'reflect')
    
    
    def test_conv2d(self):
        """Tests whether conv2d works correctly."""
        
        rng = numpy.random.default_rng(1)
        
        # odd total SAME padding at full size
        cases = [(16, 16, 4, 3, 2, 1, pyfomo.SAME), (16, 16, 4, 2, 3, 2, pyfomo.SAME)]
        
        for i in range(100):
            k = int(rng.integers(1, 4))
            h, w = int(rng.integers(k, 17)), int(rng.integers(k, 17))
            cases.append((h, w, int(rng.integers(1, 5)), int(rng.integers(1, 5)), k, int(rng.integers(1, 3)), pyfomo.PADDING[i % 2]))
        
        for h, w, cin, cout, k, stride, padding in cases:
            
            x = rng.normal(size=(1, h, w, cin))
            kernel = rng.normal(size=(k, k, cin, cout))
            bias = rng.normal(size=cout)
            
            result = pyfomo.conv2d(pyfomo.Tensor(x), pyfomo.Tensor(kernel), bias, stride, padding)
            expected = naive_conv2d(x.astype(numpy.float32), kernel.astype(numpy.float32), bias, stride, padding)
            
            npt.assert_allclose(result.Array, expected, atol=1e-5, rtol=0)
    
    
    def test_depthwise_conv2d(self):
        """Tests whether depthwise_conv2d works correctly."""
        
        rng = numpy.random.default_rng(2)
        
        # odd total SAME padding at full size
        cases = [(16, 16, 4, 2, 1, pyfomo.SAME), (16, 16, 4, 3, 2, pyfomo.SAME)]
        
        for i in range(100):
            k = int(rng.integers(1, 4))
            h, w = int(rng.integers(k, 17)), int(rng.integers(k, 17))
            cases.append((h, w, int(rng.integers(1, 5)), k, int(rng.integers(1, 3)), pyfomo.PADDING[i % 2]))
        
        for h, w, c, k, stride, padding in cases:
            
            x = rng.normal(size=(1, h, w, c))
            kernel = rng.normal(size=(k, k, c, 1))
            bias = rng.normal(size=c)
            
            result = pyfomo.depthwise_conv2d(pyfomo.Tensor(x), pyfomo.Tensor(kernel), bias, stride, padding)
            expected = naive_conv2d(x.astype(numpy.float32), kernel.astype(numpy.float32), bias, stride, padding, depthwise=True)
            
            npt.assert_allclose(result.Array, expected, atol=1e-5, rtol=0)
    
    
    def test_conv2d_identity(self):
        """Tests whether conv2d works correctly."""
        
        x = numpy.arange(2 * 5 * 5 * 3).reshape((2, 5, 5, 3))
        kernel = numpy.zeros((3, 3, 3, 3))
        kernel[1, 1] = numpy.eye(3)
        
        result = pyfomo.conv2d(pyfomo.Tensor(x), pyfomo.Tensor(kernel), [0, 0, 0])
        npt.assert_array_equal(result.Array, x)
        
        with self.assertRaises(pyfomo.ShapeError):
            pyfomo.conv2d(pyfomo.Tensor(x), pyfomo.Tensor(numpy.zeros((3, 3, 2, 3))), [0, 0, 0])
        
        with self.assertRaises(pyfomo.ShapeError):
            pyfomo.conv2d(pyfomo.Tensor(x), pyfomo.Tensor(kernel), [0, 0])
    
    
    def test_relu6_add(self):
        """Tests whether relu6 and add work correctly."""
        
        x = pyfomo.Tensor([[[[-1.0, 0.5, 6.5, 3.0]]]])
        npt.assert_array_equal(pyfomo.relu6(x).Array, [[[[0.0, 0.5, 6.0, 3.0]]]])
        npt.assert_array_equal(pyfomo.add(x, x).Array, [[[[-2.0, 1.0, 13.0, 6.0]]]])
        
        with self.assertRaises(pyfomo.ShapeError):
            pyfomo.add(x, pyfomo.Tensor(numpy.zeros((1, 1, 1, 3))))
    
    
    def test_softmax_per_cell(self):
        """Tests whether softmax_per_cell works correctly."""
        
        rng = numpy.random.default_rng(3)
        logits = pyfomo.Tensor(rng.normal(scale=20, size=(2, 4, 4, 3)))
        
        probs = pyfomo.softmax_per_cell(logits).Array
        npt.assert_allclose(probs.sum(axis=-1), 1.0, atol=1e-6)
        npt.assert_array_equal(probs.argmax(axis=-1), logits.Array.argmax(axis=-1))
    
    
    def test_quant_params(self):
        """Tests whether QuantParams works correctly."""
        
        params = pyfomo.QuantParams(0.5, -3)
        self.assertEqual(params, pyfomo.QuantParams(0.5, -3))
        self.assertEqual(pyfomo.QuantParams.FromJSON(params.ToJSON()), params)
        
        with self.assertRaises(ValueError):
            pyfomo.QuantParams(0.0)
        
        with self.assertRaises(ValueError):
            pyfomo.QuantParams(1.0, 128)
        
        with self.assertRaises(ValueError):
            pyfomo.QuantTensor([[[[200]]]], params)
        
        tensor = pyfomo.QuantTensor([[[[-3, -1, 1]]]], params)
        npt.assert_array_equal(tensor.Dequantize(), [[[[0.0, 1.0, 2.0]]]])
    
    
    def test_round_half_away(self):
        """Tests whether round_half_away works correctly."""
        
        npt.assert_array_equal(round_half_away(numpy.array([0.5, 1.5, -0.5, -1.5, 2.4, -2.6])), [1, 2, -1, -2, 2, -3])
        npt.assert_array_equal(requantize([10, -10, 1000], 0.25, 1), [4, -2, 127])
        
        params = pyfomo.QuantParams(0.1, 0)
        npt.assert_array_equal(quantize_values([0.05, -0.05, 100.0], params), [1, -1, 127])
    
    
    def test_conv2d_int8(self):
        """Tests whether conv2d_int8 works correctly."""
        
        rng = numpy.random.default_rng(4)
        in_params = pyfomo.QuantParams(0.02, -10)
        w_params = pyfomo.QuantParams(0.01, 0)
        out_params = pyfomo.QuantParams(0.05, 3)
        
        for stride in (1, 2):
            
            x = rng.integers(-128, 128, size=(1, 7, 7, 4))
            w = rng.integers(-127, 128, size=(3, 3, 4, 5))
            b = rng.integers(-5000, 5000, size=5)
            
            result = conv2d_int8(pyfomo.QuantTensor(x, in_params), pyfomo.QuantTensor(w, w_params), b, out_params, stride)
            
            # integer reference with zero point padding
            acc = naive_conv2d((x - in_params.ZeroPoint).astype(numpy.float64), w.astype(numpy.float64), b, stride, pyfomo.SAME)
            expected = requantize(acc, in_params.Scale * w_params.Scale / out_params.Scale, out_params.ZeroPoint)
            
            npt.assert_array_equal(result.Array, expected)
    
    
    def test_depthwise_conv2d_int8(self):
        """Tests whether depthwise_conv2d_int8 works correctly."""
        
        rng = numpy.random.default_rng(5)
        in_params = pyfomo.QuantParams(0.03, 7)
        w_params = pyfomo.QuantParams(0.02, 0)
        out_params = pyfomo.QuantParams(0.04, -2)
        
        x = rng.integers(-128, 128, size=(1, 6, 6, 3))
        w = rng.integers(-127, 128, size=(3, 3, 3, 1))
        b = rng.integers(-500, 500, size=3)
        
        result = depthwise_conv2d_int8(pyfomo.QuantTensor(x, in_params), pyfomo.QuantTensor(w, w_params), b, out_params, 2)
        
        acc = naive_conv2d((x - in_params.ZeroPoint).astype(numpy.float64), w.astype(numpy.float64), b, 2, pyfomo.SAME, depthwise=True)
        expected = requantize(acc, in_params.Scale * w_params.Scale / out_params.Scale, out_params.ZeroPoint)
        
        npt.assert_array_equal(result.Array, expected)
    
    
    def test_accumulator(self):
        """Tests whether accumulator checks work correctly."""
        
        in_params = pyfomo.QuantParams(1.0, 0)
        w_params = pyfomo.QuantParams(1.0, 0)
        
        self.assertEqual(accumulator_bound(3, 3, 4, in_params, w_params, numpy.array([5, -9])), 9 * 4 * 128 * 128 + 9)
        
        x = pyfomo.QuantTensor(numpy.zeros((1, 3, 3, 1)), in_params)
        w = pyfomo.QuantTensor(numpy.zeros((1, 1, 1, 1)), w_params)
        
        with self.assertRaises(pyfomo.AccumulatorOverflowError):
            conv2d_int8(x, w, [2**31], in_params)
        
        with self.assertRaises(ArithmeticError):
            conv2d_int8(x, w, [2**31], in_params)
    
    
    def test_relu6_add_int8(self):
        """Tests whether relu6_int8 and add_int8 work correctly."""
        
        params = pyfomo.QuantParams(0.1, -20)
        x = pyfomo.QuantTensor([[[[-128, -20, 0, 127]]]], params)
        
        out_params = pyfomo.QuantParams(6.0 / 255, -128)
        result = relu6_int8(x, out_params).Dequantize()
        expected = numpy.clip(x.Dequantize(), 0, 6)
        npt.assert_allclose(result, expected, atol=out_params.Scale / 2 + 1e-9)
        
        total = add_int8(x, x, pyfomo.QuantParams(0.2, -20))
        npt.assert_array_equal(total.Array, x.Array)
        
        with self.assertRaises(pyfomo.ShapeError):
            add_int8(x, pyfomo.QuantTensor([[[[0]]]], params), params)


# run test case
if __name__ == "__main__":
    unittest.main(verbosity=2)
