from .basics import convert
from .basics import print_
from .basics import format_

from .path import Path
from .config import Config
from .flags import Flags
from .logger import Logger
from .pool import Pool
from .timer import Timer

from . import logger
