import logging

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d,%H:%M:%S"


def _owned(handler):
    return getattr(handler, "_projline", False)


def setup_logging(log_file, level):
    """Route the root logger to stderr and optionally to ``log_file``.

    Handlers installed by an earlier call are replaced, so ``run`` may be
    called repeatedly in one process.
    """
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    logging.root.setLevel(level)
    for name in list(logging.root.manager.loggerDict):
        logging.getLogger(name).setLevel(level)

    for handler in [h for h in logging.root.handlers if _owned(h)]:
        logging.root.removeHandler(handler)
        handler.close()

    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(filename=log_file))
    for handler in handlers:
        handler.setFormatter(formatter)
        handler._projline = True
        logging.root.addHandler(handler)
