"""
日志系统模块

本模块负责 cayley-dist 的日志记录功能，提供统一的日志接口。

主要功能：
1. 日志目录和文件管理
2. 日志轮转（防止长实验把日志文件写爆）
3. 分级日志记录（DEBUG, INFO, WARNING, ERROR, CRITICAL）
4. 双输出：文件（完整日志）+ 控制台（仅严重错误）

日志配置：
- 日志文件位置：~/.cayley_dist/cayley_dist.log
- 单文件大小限制：1MB
- 备份文件数量：5 个
- 控制台输出：仅 CRITICAL 级别（stdout 留给 JSON 输出，stderr 留给 Rich 表格）

异常处理：
- 如果日志文件创建失败，回退到临时目录
"""

# ============ 标准库导入 ============
import logging
import logging.handlers
import sys
import tempfile
from pathlib import Path

# ============ 本地模块导入 ============
from src.core.config import CONFIG_DIR  # 配置目录


# ============ 日志路径定义 ============

LOGGER_NAME = "cayley_dist"

# 日志目录：使用配置目录
LOG_DIR = CONFIG_DIR

# 日志文件路径
LOG_FILE = LOG_DIR / "cayley_dist.log"

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# ============ 日志初始化函数 ============

def _rotating_handler(path: Path) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    return logging.handlers.RotatingFileHandler(
        path, maxBytes=1024 * 1024, backupCount=5, encoding="utf-8"
    )


def setup_logging() -> logging.Logger:
    """
    初始化日志系统

    日志级别：
    - 文件记录：DEBUG 及以上（完整日志）
    - 控制台输出：CRITICAL 及以上（仅严重错误）

    返回:
        配置好的 logger 对象
    """
    global LOG_FILE

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)

    # 避免重复添加处理器（多进程 worker 会重复导入本模块）
    if logger.handlers:
        return logger

    try:
        file_handler = _rotating_handler(LOG_FILE)
    except (PermissionError, OSError):
        LOG_FILE = Path(tempfile.gettempdir()) / "cayley_dist" / "cayley_dist.log"
        file_handler = _rotating_handler(LOG_FILE)

    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.CRITICAL)

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)

    return logger


# ============ 全局日志实例 ============

# 创建默认日志实例，供其他模块导入使用
logger = setup_logging()
