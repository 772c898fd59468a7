# import objects
from .tensor import Tensor
from .quant_tensor import QuantTensor, QuantParams, QMIN, QMAX
from .kernels import output_size, conv2d, depthwise_conv2d, relu6, add, softmax_per_cell
from .qkernels import round_half_away, requantize, quantize_values, accumulator_bound
from .qkernels import conv2d_int8, depthwise_conv2d_int8, relu6_int8, add_int8
