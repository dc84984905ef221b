"""
Configuration Module.

This module provides configuration settings for the orofacial kinematics pipeline.
Values can be overridden through environment variables or a local .env file.
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Application settings
APP_TITLE = "Orofacial Kinematics Toolkit"
APP_DESCRIPTION = "2D/3D mouth kinematic features and HC vs PD effect-size analysis"
APP_VERSION = "1.0.0"

# Logging
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()
LOG_FILE = os.getenv('LOG_FILE', '')

# Landmark layout (iBUG 300-W, 0-based)
LANDMARK_COUNT = 68
MOUTH_LANDMARKS = {
    "top": 51,      # upper lip, outer contour, midline
    "bottom": 57,   # lower lip, outer contour, midline
    "left": 48,     # image-left commissure
    "right": 54,    # image-right commissure
}

# Capture
NOMINAL_FPS = 30.0
MIN_FPS = 10.0
MAX_FPS = 120.0
VGA_WIDTH = 640
VGA_HEIGHT = 480

# Reconstruction gap policy
DEFAULT_MAX_GAP = int(os.getenv('OROFACIAL_MAX_GAP', '5'))
DEFAULT_MAX_INVALID_FRACTION = float(os.getenv('OROFACIAL_MAX_INVALID_FRACTION', '0.2'))

# Segmentation / normalization
REST_WINDOW_SECONDS = 5.0
MIN_REPETITION_FRAMES = 3
MIN_FEATURE_FRAMES = 5
MIN_REST_FRAMES = 3
TIME_TOLERANCE = 1e-9

# Kinematics
SMOOTHING_WINDOW = 3
SECOND_DERIVATIVE_METHODS = ("stencil", "repeated")
DEFAULT_SECOND_DERIVATIVE = os.getenv('OROFACIAL_ACCEL_METHOD', 'stencil')

# Effect-size thresholds
MEDIUM_SMD = 0.5
LARGE_SMD = 0.8
PUBLISHED_TOLERANCE = 0.15

# Output
FEATURE_PRECISION = 6
FEATURE_FLOAT_FORMAT = f"%.{FEATURE_PRECISION}g"

# Batch processing
DEFAULT_JOBS = max(1, int(os.getenv('OROFACIAL_JOBS', '1')))
DEFAULT_AGGREGATION = "per_subject"
AVAILABLE_AGGREGATIONS = {
    "per_subject": "Average each subject's repetitions, then compare subject means",
    "per_repetition": "Pool every repetition as an independent observation",
}
