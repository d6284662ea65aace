from logging.handlers import RotatingFileHandler
import logging
import os

from nullasym.config import config_by_name

LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'

logger = logging.getLogger('nullasym')


def create_runner(config_name=None, log_level=None):
    """Build a configured experiment runner.

    Without an explicit name the environment decides: NULLASYM_ENV wins,
    otherwise 'production' inside a container and 'development' elsewhere.
    """
    if config_name is None:
        config_name = os.environ.get('NULLASYM_ENV')
    if config_name is None:
        if os.path.exists('/.dockerenv'):
            config_name = 'production'
        else:
            config_name = 'development'

    config = config_by_name.get(config_name)
    if config is None:
        raise ValueError(f"unknown configuration {config_name!r}")

    os.makedirs(config.OUT_DIR, exist_ok=True)
    _configure_logging(config, log_level)

    from nullasym.experiments import registry
    from nullasym.runner import Runner

    # Importing the experiment modules registers them.
    import nullasym.experiments.catalog  # noqa: F401

    logger.info('nullasym startup (%s, %d threads)', config_name, config.LCA_THREADS)
    return Runner(config, registry)


def _configure_logging(config, log_level=None):
    level = getattr(logging, (log_level or config.LOG_LEVEL).upper(), logging.INFO)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    if config.DEBUG or config.TESTING:
        stream = logging.StreamHandler()
        stream.setFormatter(logging.Formatter(LOG_FORMAT))
        stream.setLevel(level)
        logger.addHandler(stream)
    else:
        os.makedirs(config.LOG_DIR, exist_ok=True)

        run_handler = RotatingFileHandler(
            os.path.join(config.LOG_DIR, 'runs.log'),
            maxBytes=10240000,  # 10MB
            backupCount=5
        )
        run_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        run_handler.setLevel(logging.INFO)
        logger.addHandler(run_handler)

        app_handler = RotatingFileHandler(
            os.path.join(config.LOG_DIR, 'app.log'),
            maxBytes=10240000,  # 10MB
            backupCount=3
        )
        app_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        app_handler.setLevel(logging.WARNING)
        logger.addHandler(app_handler)

    logger.setLevel(level)
