# import objects
from .targets import TargetGrid, rasterize_targets
from .loss import per_cell_loss, cell_loss
from .network import TrainingNetwork, BN_MOMENTUM, BN_EPSILON
from .optimizer import Adam
from .trainer import TRAIN_PRESETS, TrainConfig, TrainHistory
from .trainer import split_validation, split_dataset, make_labels, gradients, train
