# import modules
import numpy
from ..enums import *
from ..errors import ConfigError
from ..tensor.kernels import _conv2d, _depthwise_conv2d, _pad, _pad_amounts, _taps
from .loss import cell_loss

# define batch norm
BN_MOMENTUM = 0.9
BN_EPSILON = 1e-3


class TrainingNetwork(object):
    """
    The pyfomo.train.TrainingNetwork class represents the fixed FOMO topology
    in training form. All computations run in float64 and every convolution
    except the head is followed by batch normalization. The convolution bias
    preceding a batch normalization has no effect in training mode and stays
    frozen. Running statistics are folded into the convolutions when the
    network is exported back into pyfomo.FomoModel.
    
    Attributes:
        
        Params: {str: numpy.ndarray}
            Trainable parameters by name as 'layer/weights', 'layer/bias',
            'layer/gamma' or 'layer/beta'.
        
        State: {str: numpy.ndarray}
            Batch norm running statistics as 'layer/mean' or 'layer/var'.
    """
    
    
    def __init__(self, model):
        """
        Initializes a new instance of TrainingNetwork.
        
        Args:
            model: pyfomo.FomoModel
                Real-valued model providing topology and initial weights.
        """
        
        # check model
        if model.IsQuantized:
            message = "Only real-valued models can be trained! --> '%s'" % model.FormatTag
            raise ConfigError(message)
        
        self._model = model
        self._frozen = {}
        
        self.Params = {}
        self.State = {}
        
        # init params
        for layer in model.Layers:
            
            if layer.Weights is None:
                continue
            
            name = layer.Name
            self.Params[name+"/weights"] = layer.Weights.astype(numpy.float64)
            
            if layer.Kind == HEAD:
                self.Params[name+"/bias"] = layer.Bias.astype(numpy.float64)
                continue
            
            channels = layer.Bias.shape[0]
            self._frozen[name] = layer.Bias.astype(numpy.float64)
            self.Params[name+"/gamma"] = numpy.ones(channels)
            self.Params[name+"/beta"] = numpy.zeros(channels)
            self.State[name+"/mean"] = numpy.zeros(channels)
            self.State[name+"/var"] = numpy.ones(channels)
    
    
    @property
    def Model(self):
        """Gets source model."""
        
        return self._model
    
    
    def Loss(self, images, labels, background_weight):
        """
        Calculates training-mode loss without updating running statistics.
        
        Args:
            images: numpy.ndarray
                Images array (n, s, s, 3).
            
            labels: numpy.ndarray
                Labels array (n, gh, gw).
            
            background_weight: float
                Weight of background cells.
        
        Returns:
            float
                Loss value.
        """
        
        logits, _ = self._forward(images)
        loss, _ = cell_loss(logits, labels, background_weight, need_grad=False)
        
        return loss
    
    
    def Gradients(self, images, labels, background_weight, update_state=False):
        """
        Calculates loss and analytical gradients of all trainable parameters.
        
        Args:
            images: numpy.ndarray
                Images array (n, s, s, 3).
            
            labels: numpy.ndarray
                Labels array (n, gh, gw).
            
            background_weight: float
                Weight of background cells.
            
            update_state: bool
                If set to True, batch norm running statistics are updated.
        
        Returns:
            (float, {str: numpy.ndarray})
                Loss value and gradients by parameter name.
        """
        
        # forward
        logits, cache = self._forward(images)
        loss, grad = cell_loss(logits, labels, background_weight)
        
        # backward
        grads = self._backward(grad, cache)
        
        # update running statistics
        if update_state:
            self._update_state(cache)
        
        return loss, grads
    
    
    def Export(self):
        """
        Folds batch norm into convolutions and creates inference model.
        
        Returns:
            pyfomo.FomoModel
                Real-valued model.
        """
        
        layers = []
        
        for layer in self._model.Layers:
            
            if layer.Weights is None:
                layers.append(layer)
                continue
            
            name = layer.Name
            weights = self.Params[name+"/weights"]
            
            if layer.Kind == HEAD:
                bias = self.Params[name+"/bias"]
            
            else:
                factor = self.Params[name+"/gamma"] / numpy.sqrt(self.State[name+"/var"] + BN_EPSILON)
                bias = (self._frozen[name] - self.State[name+"/mean"]) * factor + self.Params[name+"/beta"]
                
                if layer.Kind == DEPTHWISE:
                    weights = weights * factor[None, None, :, None]
                else:
                    weights = weights * factor
            
            layers.append(layer.Replace(weights=weights.astype(numpy.float32), bias=bias.astype(numpy.float32)))
        
        return self._model.Replace(layers=layers)
    
    
    def _forward(self, images):
        """Runs training-mode forward and keeps backward cache."""
        
        x = numpy.asarray(images, dtype=numpy.float64)
        
        # check input
        expected = self._model.InputShape[1:]
        if x.ndim != 4 or x.shape[1:] != expected:
            message = "Image does not match model input! --> '%s' vs '%s'" % (x.shape[1:], expected)
            raise ValueError(message)
        
        outputs = {INPUT_TENSOR: x}
        cache = []
        
        for layer in self._model.Layers:
            
            name = layer.Name
            entry = {'layer': layer, 'input': x}
            
            if layer.Kind in (CONV, POINTWISE, DEPTHWISE, HEAD):
                
                weights = self.Params[name+"/weights"]
                
                if layer.Kind == DEPTHWISE:
                    y = _depthwise_conv2d(x, weights, None, layer.Stride, layer.Padding)
                else:
                    y = _conv2d(x, weights, None, layer.Stride, layer.Padding)
                
                if layer.Kind == HEAD:
                    y = y + self.Params[name+"/bias"]
                else:
                    y = self._batch_norm(y, name, entry)
            
            elif layer.Kind == RELU6:
                entry['mask'] = (x > 0) & (x < 6)
                y = numpy.clip(x, 0, 6)
            
            elif layer.Kind == RESIDUAL_ADD:
                y = x + outputs[layer.Skip]
            
            else:
                message = "Layer kind is not trainable! --> '%s'" % layer.Kind
                raise ConfigError(message)
            
            cache.append(entry)
            outputs[name] = y
            x = y
        
        return x, cache
    
    
    def _batch_norm(self, y, name, entry):
        """Normalizes by batch statistics and keeps backward cache."""
        
        mean = y.mean(axis=(0, 1, 2))
        var = y.var(axis=(0, 1, 2))
        inv_std = 1.0 / numpy.sqrt(var + BN_EPSILON)
        xhat = (y - mean) * inv_std
        
        entry['xhat'] = xhat
        entry['inv_std'] = inv_std
        entry['mean'] = mean
        entry['var'] = var
        entry['count'] = y.shape[0] * y.shape[1] * y.shape[2]
        
        return xhat * self.Params[name+"/gamma"] + self.Params[name+"/beta"]
    
    
    def _backward(self, grad, cache):
        """Propagates logits gradient back through cached layers."""
        
        grads = {}
        pending = {}
        
        for i in range(len(cache)-1, -1, -1):
            
            entry = cache[i]
            layer = entry['layer']
            name = layer.Name
            
            # add gradient flowing from skip connections
            if name in pending:
                grad = grad + pending.pop(name)
            
            if layer.Kind == RELU6:
                grad = grad * entry['mask']
            
            elif layer.Kind == RESIDUAL_ADD:
                pending[layer.Skip] = pending.get(layer.Skip, 0) + grad
            
            else:
                
                # batch norm
                if layer.Kind == HEAD:
                    grads[name+"/bias"] = grad.sum(axis=(0, 1, 2))
                else:
                    grad = self._batch_norm_backward(grad, name, entry, grads)
                
                # convolution
                weights = self.Params[name+"/weights"]
                if layer.Kind == DEPTHWISE:
                    grad, grads[name+"/weights"] = _depthwise_conv2d_backward(entry['input'], weights, grad, layer.Stride, layer.Padding)
                else:
                    grad, grads[name+"/weights"] = _conv2d_backward(entry['input'], weights, grad, layer.Stride, layer.Padding)
        
        return grads
    
    
    def _batch_norm_backward(self, grad, name, entry, grads):
        """Propagates gradient through batch normalization."""
        
        xhat = entry['xhat']
        count = entry['count']
        
        grads[name+"/gamma"] = numpy.sum(grad * xhat, axis=(0, 1, 2))
        grads[name+"/beta"] = numpy.sum(grad, axis=(0, 1, 2))
        
        dxhat = grad * self.Params[name+"/gamma"]
        sum_dxhat = dxhat.sum(axis=(0, 1, 2))
        sum_dxhat_xhat = numpy.sum(dxhat * xhat, axis=(0, 1, 2))
        
        return (entry['inv_std'] / count) * (count * dxhat - sum_dxhat - xhat * sum_dxhat_xhat)
    
    
    def _update_state(self, cache):
        """Updates running statistics from cached batch statistics."""
        
        for entry in cache:
            
            if 'xhat' not in entry:
                continue
            
            name = entry['layer'].Name
            count = entry['count']
            var = entry['var'] * count / (count - 1) if count > 1 else entry['var']
            
            self.State[name+"/mean"] = BN_MOMENTUM * self.State[name+"/mean"] + (1 - BN_MOMENTUM) * entry['mean']
            self.State[name+"/var"] = BN_MOMENTUM * self.State[name+"/var"] + (1 - BN_MOMENTUM) * var


def _conv2d_backward(x, w, grad, stride, padding):
    """Gets input and kernel gradients of a direct convolution."""
    
    kh, kw, cin, cout = w.shape
    
    xp, oh, ow = _pad(x, kh, kw, stride, padding)
    dxp = numpy.zeros(xp.shape)
    dw = numpy.zeros(w.shape)
    
    for i, j, patch in _taps(xp, kh, kw, stride, oh, ow):
        dw[i, j] = numpy.tensordot(patch, grad, axes=([0, 1, 2], [0, 1, 2]))
        dxp[:, i:i + stride*(oh-1) + 1:stride, j:j + stride*(ow-1) + 1:stride, :] += numpy.tensordot(grad, w[i, j], axes=([3], [1]))
    
    return _unpad(dxp, x.shape, kh, kw, stride, padding), dw


def _depthwise_conv2d_backward(x, w, grad, stride, padding):
    """Gets input and kernel gradients of a direct depthwise convolution."""
    
    kh, kw, c, _ = w.shape
    
    xp, oh, ow = _pad(x, kh, kw, stride, padding)
    dxp = numpy.zeros(xp.shape)
    dw = numpy.zeros(w.shape)
    
    for i, j, patch in _taps(xp, kh, kw, stride, oh, ow):
        dw[i, j, :, 0] = numpy.sum(patch * grad, axis=(0, 1, 2))
        dxp[:, i:i + stride*(oh-1) + 1:stride, j:j + stride*(ow-1) + 1:stride, :] += grad * w[i, j, :, 0]
    
    return _unpad(dxp, x.shape, kh, kw, stride, padding), dw


def _unpad(dxp, shape, kh, kw, stride, padding):
    """Removes padding from padded input gradient."""
    
    _, h, w, _ = shape
    _, top, _ = _pad_amounts(h, kh, stride, padding)
    _, left, _ = _pad_amounts(w, kw, stride, padding)
    
    return dxp[:, top:top+h, left:left+w, :]
