from os import environ
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = environ.get('MENULAB_LOG_LEVEL', 'WARNING')
WORKERS = int(environ.get('MENULAB_WORKERS', '1'))
# int64 cells per vectorised search block
SEARCH_BLOCK = int(environ.get('MENULAB_SEARCH_BLOCK', '4000000'))
DATA_DIR = Path(environ.get('MENULAB_DATA_DIR', Path(__file__).resolve().parent / 'data'))
LP_METHOD = environ.get('MENULAB_LP_METHOD', 'auto')
EXACT_LP_MAX_TYPES = int(environ.get('MENULAB_EXACT_LP_MAX_TYPES', '12'))
MAX_PICKS = int(environ.get('MENULAB_MAX_PICKS', '3'))
MAX_DEVIATIONS = int(environ.get('MENULAB_MAX_DEVIATIONS', '2000000'))
