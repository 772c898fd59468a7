# plotting needs matplotlib, import pyfomo.review.plotting explicitly
