package org.example.kitchen;

import java.util.List;
import java.util.ArrayList;
import java.util.concurrent.*;
import static java.lang.Math.max;

/** Exercises most of the supported subset. */
@javax.annotation.concurrent.ThreadSafe
public final class Kitchen<T extends Comparable<T>> extends Object implements Runnable {
  private static final int LIMIT = 0x7f_ff;
  private final List<List<T>> nested = new ArrayList<>();
  private volatile boolean stopped;
  private int[] counts = new int[8], other;
  private char c = '\u0000';
  private String name = "café \"quoted\"";
  private long big = 10L, small = 0L;
  private double ratio = 1.5e-3;
  private final ConcurrentHashMap<String, Integer> index = new ConcurrentHashMap<>();

  static {
    System.out.println("loaded");
  }

  {
    counts[0] = 1;
  }

  public Kitchen() {
    this(3);
  }

  Kitchen(int n) {
    super();
    for (int i = 0; i < n; i++) {
      counts[i % 8] += i;
    }
  }

  @Override
  public synchronized void run() {
    int i = 0, j;
    j = i++ + --i;
    while (!stopped && i < LIMIT) {
      i <<= 1;
      if (i > 100) break;
      else if (i == 3) continue;
    }
    do {
      i--;
    } while (i > 0);
    for (T item : nested.get(0)) {
      name = name + item;
    }
    synchronized (this) {
      ratio = ratio * 2 > 1 ? ratio / 2 : (double) i;
    }
    try {
      index.put(name, counts.length);
    } catch (IllegalStateException | IllegalArgumentException e) {
      throw new RuntimeException(e);
    } finally {
      stopped = true;
    }
    Object o = name;
    if (o instanceof String) {
      String s = (String) o;
      big += s.length();
    }
    int[][] grid = new int[2][];
    int[] init = {1, 2, 3};
    long mask = big >>> 3 & ~small | (big ^ small);
    Class<?> k = Kitchen.class;
    boolean gt = j >= i && i <= j || j != 0;
    List<String> strs = new ArrayList<String>();
    strs.add(String.valueOf(max(1, 2)));
    Kitchen.this.other = null;
    return;
  }

  protected <U> U first(List<? extends U> items, U... fallback) throws Exception {
    return items.isEmpty() ? fallback[0] : items.get(0);
  }

  abstract static class Inner {
    abstract void go();
  }

  enum Mode { ON, OFF; }

  interface Callback {
    void done(int code);
  }
}
