import os

from dotenv import load_dotenv

# Values from a local .env override nothing already exported in the shell.
load_dotenv()


class Config:
    # Parallelism
    LCA_THREADS = int(os.environ.get('LCA_THREADS') or str(os.cpu_count() or 1))

    # Output locations
    OUT_DIR = os.environ.get('NULLASYM_OUT_DIR') or 'results'
    LOG_DIR = os.environ.get('NULLASYM_LOG_DIR') or 'logs'

    # Quadrature defaults
    N_THETA = int(os.environ.get('NULLASYM_N_THETA') or '64')
    FFT_POINTS = int(os.environ.get('NULLASYM_FFT_POINTS') or '16384')
    S_MAX_SCALE = float(os.environ.get('NULLASYM_S_MAX_SCALE') or '64')

    # Acceptance
    SEED = int(os.environ.get('NULLASYM_SEED') or '20240601')
    TOLERANCE = float(os.environ.get('NULLASYM_TOLERANCE') or '1e-4')

    DEBUG = False
    TESTING = False
    LOG_LEVEL = 'INFO'


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = 'DEBUG'


class ProductionConfig(Config):
    DEBUG = False


class TestingConfig(Config):
    TESTING = True
    LCA_THREADS = 1
    N_THETA = 32


config_by_name = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
}
