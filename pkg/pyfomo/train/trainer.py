# import modules
import logging
import numpy
from ..enums import *
from ..errors import ConfigError, ShapeError
from ..metrics import evaluate
from .targets import rasterize_targets
from .network import TrainingNetwork
from .optimizer import Adam

# init logger
logger = logging.getLogger(__name__)

# define presets per terrain dataset
TRAIN_PRESETS = {
    'drone': {'learning_rate': 0.0001, 'batch_size': 32, 'epochs': 300, 'train_fraction': 98 / 122},
    'shipwreck': {'learning_rate': 0.0005, 'batch_size': 16, 'epochs': 300, 'train_fraction': 88 / 111},
    'rocks': {'learning_rate': 0.0001, 'batch_size': 16, 'epochs': 300, 'train_fraction': 771 / 965},
    'rover': {'learning_rate': 0.0001, 'batch_size': 32, 'epochs': 500, 'train_fraction': 117 / 150},
}


class TrainConfig(object):
    """
    Holds training options.
    
    Attributes:
        
        LearningRate: float
            Adam step size.
        
        BatchSize: int
            Number of images per update.
        
        Epochs: int
            Number of passes over training images.
        
        BackgroundWeight: float
            Loss weight of background cells within (0, 1].
        
        Seed: int
            Random seed driving validation split, shuffling and flips.
        
        TrainFraction: float
            Fraction of a corpus kept for training by
            pyfomo.train.split_dataset, the rest is held out for testing.
        
        ValidationFraction: float
            Fraction of training images held out for model selection.
        
        Flip: bool
            Enables random horizontal flips.
        
        Tau: float
            Detection threshold for validation.
        
        Tolerance: float
            Matching distance in cell widths for validation.
    """
    
    
    def __init__(self, learning_rate=0.0001, batch_size=32, epochs=300, background_weight=0.1, seed=42, train_fraction=0.8, validation_fraction=0.2, flip=False, tau=0.5, tolerance=1.0):
        """Initializes a new instance of TrainConfig."""
        
        # check values
        if not learning_rate > 0:
            message = "Learning rate must be positive! --> '%s'" % learning_rate
            raise ConfigError(message)
        
        if int(epochs) != epochs or epochs < 1:
            message = "Number of epochs must be at least 1! --> '%s'" % epochs
            raise ConfigError(message)
        
        if int(batch_size) != batch_size or batch_size < 1:
            message = "Batch size must be a positive integer! --> '%s'" % batch_size
            raise ConfigError(message)
        
        if not 0 < background_weight <= 1:
            message = "Background weight must be within (0, 1]! --> '%s'" % background_weight
            raise ConfigError(message)
        
        if not 0 < train_fraction <= 1:
            message = "Train fraction must be within (0, 1]! --> '%s'" % train_fraction
            raise ConfigError(message)
        
        if not 0 <= validation_fraction < 1:
            message = "Validation fraction must be within [0, 1)! --> '%s'" % validation_fraction
            raise ConfigError(message)
        
        self.LearningRate = float(learning_rate)
        self.BatchSize = int(batch_size)
        self.Epochs = int(epochs)
        self.BackgroundWeight = float(background_weight)
        self.Seed = int(seed)
        self.TrainFraction = float(train_fraction)
        self.ValidationFraction = float(validation_fraction)
        self.Flip = bool(flip)
        self.Tau = float(tau)
        self.Tolerance = float(tolerance)
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "TrainConfig(lr=%g, batch=%d, epochs=%d, seed=%d)" % (self.LearningRate, self.BatchSize, self.Epochs, self.Seed)
    
    
    @staticmethod
    def FromPreset(name, **overrides):
        """
        Creates configuration from named dataset preset.
        
        Args:
            name: str
                Preset name as one of the TRAIN_PRESETS keys.
            
            **overrides: {str: ?}
                Options replacing preset values.
        
        Returns:
            pyfomo.TrainConfig
                Training options.
        """
        
        if name not in TRAIN_PRESETS:
            message = "Unknown training preset! --> '%s'" % name
            raise ConfigError(message)
        
        args = dict(TRAIN_PRESETS[name])
        args.update(overrides)
        
        return TrainConfig(**args)


class TrainHistory(object):
    """
    Holds per-epoch training progress.
    
    Attributes:
        
        Losses: [float,]
            Mean training loss per epoch.
        
        ValidationF1: [float or None,]
            Validation macro F1 per epoch.
        
        BestEpoch: int or None
            Index of the selected epoch.
    """
    
    
    def __init__(self):
        """Initializes a new instance of TrainHistory."""
        
        self.Losses = []
        self.ValidationF1 = []
        self.BestEpoch = None
    
    
    def __len__(self):
        """Gets number of epochs."""
        
        return len(self.Losses)
    
    
    def Add(self, loss, val_f1):
        """Adds epoch record."""
        
        self.Losses.append(float(loss))
        self.ValidationF1.append(None if val_f1 is None else float(val_f1))
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'loss': list(self.Losses),
            'val_f1': list(self.ValidationF1),
            'best_epoch': self.BestEpoch}


def split_validation(count, fraction=0.2, seed=42):
    """
    Splits image indices into training and validation part.
    
    Args:
        count: int
            Number of images.
        
        fraction: float
            Validation fraction.
        
        seed: int
            Random seed.
    
    Returns:
        (numpy.ndarray, numpy.ndarray)
            Sorted training and validation indices.
    """
    
    rng = numpy.random.default_rng(seed)
    order = rng.permutation(count)
    
    # keep at least one training image
    size = int(round(count * fraction))
    if fraction > 0 and count > 1:
        size = max(1, size)
    size = min(size, count - 1) if count else 0
    
    return numpy.sort(order[size:]), numpy.sort(order[:size])


def split_dataset(dataset, config):
    """
    Splits a whole corpus into training and test part by the configured
    train fraction and seed.
    
    Args:
        dataset: pyfomo.Dataset
            Whole corpus.
        
        config: pyfomo.TrainConfig
            Training options.
    
    Returns:
        (pyfomo.Dataset, pyfomo.Dataset)
            Training and test part, the test part is empty for fraction 1.
    """
    
    train_idx, test_idx = split_validation(len(dataset), 1.0 - config.TrainFraction, config.Seed)
    
    return dataset.Subset(train_idx), dataset.Subset(test_idx)


def make_labels(dataset, input_size, cell_size=CELL_SIZE):
    """
    Rasterizes ground-truth objects of all dataset images.
    
    Args:
        dataset: pyfomo.Dataset
            Dataset with objects.
        
        input_size: int
            Image size in pixels.
        
        cell_size: int
            Cell size in pixels.
    
    Returns:
        numpy.ndarray
            Labels array (n, gh, gw).
    """
    
    grids = [rasterize_targets(objs, input_size, cell_size, dataset.NumClasses).Cells for objs in dataset.Objects]
    
    return numpy.stack(grids)


def gradients(model, images, targets, config):
    """
    Calculates analytical gradients of mean per-cell loss over a batch in
    training mode.
    
    Args:
        model: pyfomo.FomoModel or pyfomo.train.TrainingNetwork
            Model to differentiate.
        
        images: numpy.ndarray
            Images array (n, s, s, 3).
        
        targets: (pyfomo.train.TargetGrid,)
            Target labels per image.
        
        config: pyfomo.TrainConfig
            Training options.
    
    Returns:
        {str: numpy.ndarray}
            Gradients by parameter name.
    """
    
    if len(images) == 0:
        message = "Batch must not be empty!"
        raise ConfigError(message)
    
    network = model if isinstance(model, TrainingNetwork) else TrainingNetwork(model)
    labels = numpy.stack([t.Cells for t in targets])
    
    loss, grads = network.Gradients(images, labels, config.BackgroundWeight)
    
    return grads


def train(model, dataset, config):
    """
    Trains the model by Adam on weighted per-cell cross-entropy. The model
    with the best validation macro F1 is returned, the earliest one on ties.
    
    Args:
        model: pyfomo.FomoModel
            Initial real-valued model.
        
        dataset: pyfomo.Dataset
            Training images at model input size.
        
        config: pyfomo.TrainConfig
            Training options.
    
    Returns:
        (pyfomo.FomoModel, pyfomo.TrainHistory)
            Selected model and training history.
    """
    
    # check dataset
    if len(dataset) == 0:
        message = "Training dataset is empty!"
        raise ConfigError(message)
    
    size = model.Config.InputSize
    if dataset.Images.shape[1:] != (size, size, 3):
        message = "Dataset images do not match model input! --> '%s'" % (dataset.Images.shape[1:],)
        raise ShapeError(message)
    
    if dataset.NumClasses != model.Config.NumClasses:
        message = "Dataset classes do not match model! --> '%d' vs '%d'" % (dataset.NumClasses, model.Config.NumClasses)
        raise ConfigError(message)
    
    # init data
    images = numpy.asarray(dataset.Images, dtype=numpy.float64)
    labels = make_labels(dataset, size, model.Config.CellSize)
    train_idx, val_idx = split_validation(len(dataset), config.ValidationFraction, config.Seed)
    validation = dataset.Subset(val_idx) if len(val_idx) else None
    
    # init training
    rng = numpy.random.default_rng((config.Seed, 1))
    network = TrainingNetwork(model)
    optimizer = Adam(network.Params, config.LearningRate)
    history = TrainHistory()
    
    best_model = None
    best_f1 = None
    
    logger.info("training %d images, validating %d, %d epochs", len(train_idx), len(val_idx), config.Epochs)
    
    for epoch in range(config.Epochs):
        
        # run batches
        order = rng.permutation(train_idx)
        total = 0.0
        
        for start in range(0, len(order), config.BatchSize):
            
            batch = order[start:start+config.BatchSize]
            x = images[batch]
            y = labels[batch]
            
            if config.Flip:
                x, y = _flip_batch(x, y, rng)
            
            loss, grads = network.Gradients(x, y, config.BackgroundWeight, update_state=True)
            optimizer.Step(network.Params, grads)
            
            total += loss * len(batch)
        
        epoch_loss = total / len(order)
        
        # validate
        current = network.Export()
        val_f1 = None
        
        if validation is not None:
            val_f1 = evaluate(current, validation, config.Tau, config.Tolerance).MacroF1
        
        history.Add(epoch_loss, val_f1)
        
        if val_f1 is None:
            logger.info("epoch %d loss %.6f", epoch+1, epoch_loss)
        else:
            logger.info("epoch %d loss %.6f val_f1 %.4f", epoch+1, epoch_loss, val_f1)
        
        # keep best
        if val_f1 is None or best_f1 is None or val_f1 > best_f1:
            best_model = current
            best_f1 = val_f1
            history.BestEpoch = epoch
    
    logger.info("selected epoch %d", history.BestEpoch+1)
    
    return best_model, history


def _flip_batch(x, y, rng):
    """Mirrors random half of the batch horizontally."""
    
    mask = rng.random(len(x)) < 0.5
    if not mask.any():
        return x, y
    
    x = x.copy()
    y = y.copy()
    
    x[mask] = x[mask][:, :, ::-1, :]
    y[mask] = y[mask][:, :, ::-1]
    
    return x, y
