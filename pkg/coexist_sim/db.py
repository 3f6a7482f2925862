from contextlib import contextmanager
from functools import lru_cache

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from .models import Base


@lru_cache(maxsize=8)
def get_engine(url: str):
    return create_engine(url, pool_pre_ping=True)


def create_schema(url: str):
    Base.metadata.create_all(bind=get_engine(url))


@contextmanager
def db_session(url: str):
    session = sessionmaker(bind=get_engine(url), autoflush=False)()
    try:
        yield session
        session.commit()
    except:
        session.rollback()
        raise
    finally:
        session.close()
