# import modules
import numpy

# define defaults
BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


class Adam(object):
    """
    Adam optimizer with bias-corrected moment estimates. Parameters are
    updated in place in sorted name order.
    """
    
    
    def __init__(self, params, learning_rate, beta1=BETA1, beta2=BETA2, epsilon=EPSILON):
        """
        Initializes a new instance of Adam.
        
        Args:
            params: {str: numpy.ndarray}
                Parameters to optimize.
            
            learning_rate: float
                Step size.
            
            beta1: float
                First moment decay.
            
            beta2: float
                Second moment decay.
            
            epsilon: float
                Denominator stabilizer.
        """
        
        self.LearningRate = float(learning_rate)
        self.Beta1 = float(beta1)
        self.Beta2 = float(beta2)
        self.Epsilon = float(epsilon)
        
        self._step = 0
        self._m = {k: numpy.zeros_like(v) for k, v in params.items()}
        self._v = {k: numpy.zeros_like(v) for k, v in params.items()}
    
    
    @property
    def StepCount(self):
        """Gets number of performed updates."""
        
        return self._step
    
    
    def Step(self, params, grads):
        """
        Applies single update.
        
        Args:
            params: {str: numpy.ndarray}
                Parameters to update in place.
            
            grads: {str: numpy.ndarray}
                Gradients by parameter name.
        """
        
        self._step += 1
        
        correction1 = 1.0 - self.Beta1 ** self._step
        correction2 = 1.0 - self.Beta2 ** self._step
        
        for name in sorted(grads):
            
            g = grads[name]
            m = self._m[name] = self.Beta1 * self._m[name] + (1.0 - self.Beta1) * g
            v = self._v[name] = self.Beta2 * self._v[name] + (1.0 - self.Beta2) * g * g
            
            params[name] -= self.LearningRate * (m / correction1) / (numpy.sqrt(v / correction2) + self.Epsilon)
