# define model formats
F32 = 'f32'
INT8 = 'int8'
MODEL_FORMAT = (F32, INT8)

# define padding modes
SAME = 'same'
VALID = 'valid'
PADDING = (SAME, VALID)

# define layer kinds
CONV = 'conv'
DEPTHWISE = 'depthwise'
POINTWISE = 'pointwise'
RELU6 = 'relu6'
RESIDUAL_ADD = 'residual_add'
HEAD = 'head'
LAYER_KIND = (CONV, DEPTHWISE, POINTWISE, RELU6, RESIDUAL_ADD, HEAD)

# define background styles
FLAT = 'flat'
NOISE = 'noise'
BACKGROUND = (FLAT, NOISE)

# define robot modes
CRUISE = 'cruise'
EMPHASIS = 'emphasis'
ROBOT_MODE = (CRUISE, EMPHASIS)

# define input sizes
INPUT_SIZES = (32, 64, 96)
CELL_SIZE = 8

# define name of the model input tensor
INPUT_TENSOR = 'input'

# define emphasis functions
LOOK_CLOSE = 'look-close'
SLOW_DOWN = 'slow-down'
EF_KIND = (LOOK_CLOSE, SLOW_DOWN)

# define coverage needed to count frame as on RoI
ROI_COVERAGE = 0.25
