# set version
version = (1, 0, 0)

# import main objects
from .enums import *
from .errors import *
from .lockable import Lockable
from .tensor import Tensor, QuantTensor, QuantParams
from .tensor import conv2d, depthwise_conv2d, relu6, add, softmax_per_cell
from .model import ModelConfig, FomoModel, GridHeatmap, build_fomo, forward, save_model, load_model
from .train import TRAIN_PRESETS, TrainConfig, TrainHistory, train
from .quant import CalibrationStats, calibrate, quantize_model, dequantize
from .decode import Detection, threshold_cells, merge_and_centroid, decode_heatmap, detect
from .metrics import ConfusionCounts, MetricsReport, match_detections, macro_precision, macro_recall, macro_f1, accuracy, evaluate, evaluate_detections
from .profile import MemoryPlan, LatencyReport, plan_memory, plan_buffers, bench_latency, count_macs
from .dataio import SynthConfig, DatasetManifest, Dataset, gen_synthetic, load_manifest, load_dataset, load_image
from .sim import Corridor, RobotState, EmphasisParams, SimReport, OracleDetector
from .sim import make_corridor, render_frame, ef_look_close, ef_slow_down, run_episode
