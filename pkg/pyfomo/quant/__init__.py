# import objects
from ..tensor import QuantParams, QuantTensor
from .calibration import CalibrationStats, calibrate, merge_stats, calibration_subset, save_stats, load_stats
from .quantize import symmetric_params, asymmetric_params, quantize_tensor, dequantize, quantize_model
