package com.acme;

@ThreadSafe
public class Unrelated {
  private int hits;

  public void hit() {
    hits++;
  }
}
