# import objects
from .config import ModelConfig
from .layers import LAYERS, register, create_layer
from .layers import Layer, ConvLayer, PointwiseLayer, HeadLayer, DepthwiseLayer, Relu6Layer, ResidualAddLayer
from .fomo import FomoModel, GridHeatmap, build_fomo, forward, backbone_plan, make_divisible
from .container import save_model, load_model, dump_model, parse_model
