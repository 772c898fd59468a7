# import modules
import numpy
from ..tensor import Tensor
from ..tensor.kernels import _softmax, _log_softmax


def per_cell_loss(logits, target, background_weight=0.1):
    """
    Calculates mean over cells of the weighted cross-entropy. Background
    cells are weighted by 'background_weight', foreground cells by 1.
    
    Args:
        logits: pyfomo.Tensor
            Logits tensor (1, gh, gw, k).
        
        target: pyfomo.train.TargetGrid
            Target labels.
        
        background_weight: float
            Weight of background cells.
    
    Returns:
        float
            Non-negative loss value.
    """
    
    data = logits.Array if isinstance(logits, Tensor) else numpy.asarray(logits)
    labels = target.Cells[None, ...]
    
    loss, _ = cell_loss(data, labels, background_weight, need_grad=False)
    
    return loss


def cell_loss(logits, labels, background_weight, need_grad=True):
    """
    Calculates batch loss and its gradient with respect to logits. The loss
    is the mean over images of per-image mean weighted cross-entropy.
    
    Args:
        logits: numpy.ndarray
            Logits array (n, gh, gw, k).
        
        labels: numpy.ndarray
            Labels array (n, gh, gw).
        
        background_weight: float
            Weight of background cells.
        
        need_grad: bool
            If set to False, gradient is not calculated.
    
    Returns:
        (float, numpy.ndarray or None)
            Loss value and logits gradient.
    """
    
    n, gh, gw, k = logits.shape
    
    # check shapes
    if labels.shape != (n, gh, gw):
        message = "Target grid does not match logits! --> '%s' vs '%s'" % (labels.shape, logits.shape)
        raise ValueError(message)
    
    if labels.size and labels.max() >= k:
        message = "Target label exceeds number of classes! --> '%d'" % labels.max()
        raise ValueError(message)
    
    # get weights and one-hot targets
    weights = numpy.where(labels == 0, background_weight, 1.0)
    onehot = numpy.eye(k)[labels]
    
    # calc loss
    logp = _log_softmax(logits)
    nll = -numpy.sum(onehot * logp, axis=-1)
    count = float(n * gh * gw)
    loss = float(numpy.sum(weights * nll) / count)
    
    if not need_grad:
        return max(loss, 0.0), None
    
    # calc gradient
    grad = (_softmax(logits) - onehot) * (weights / count)[..., None]
    
    return max(loss, 0.0), grad
